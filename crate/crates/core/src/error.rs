// SPDX-License-Identifier: Apache-2.0

use std::fmt;

/// Source position of a diagnostic, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    UnknownSignal,
    DuplicateProperty,
    DanglingDirective,
    DuplicateDirective,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParseErrorKind::Lexical => "lexical error",
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::UnknownSignal => "unknown signal",
            ParseErrorKind::DuplicateProperty => "duplicate property",
            ParseErrorKind::DanglingDirective => "dangling directive",
            ParseErrorKind::DuplicateDirective => "duplicate directive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{kind} at {pos}: {message}")]
    Parse {
        kind: ParseErrorKind,
        pos: Pos,
        message: String,
    },

    #[error("elaboration error in property `{property}`: {message}")]
    Elaboration { property: String, message: String },

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(kind: ParseErrorKind, pos: Pos, message: impl Into<String>) -> Self {
        Error::Parse {
            kind,
            pos,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
