// SPDX-License-Identifier: Apache-2.0

//! Lexer and recursive-descent parser for property texts.
//!
//! ```text
//! file       = { prop_decl | directive } ;
//! prop_decl  = "property" IDENT ";" expr "|->" expr ";" "endproperty" ;
//! directive  = [ IDENT ":" ] ("assert"|"assume"|"cover") "property" "(" IDENT ")" ";" ;
//! expr       = term { "&&" term } ;
//! term       = "(" expr ")" | atom "==" atom | "1" ;
//! atom       = ("impl"|"spec") "." IDENT | INT_LITERAL ;
//! ```

use std::collections::{HashMap, HashSet};

use super::ast::{Atom, Directive, Expr, Property, PropertyFile, Role, SignalRef};
use crate::error::{Error, ParseErrorKind, Pos, Result};
use crate::signals::{Namespace, Signal};

const KEYWORDS: &[&str] = &["property", "endproperty", "assert", "assume", "cover", "impl", "spec"];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Semi,
    Colon,
    Dot,
    LParen,
    RParen,
    EqEq,
    AndAnd,
    Implies,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(v) => format!("literal {v}"),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::AndAnd => "`&&`".into(),
            Tok::Implies => "`|->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! bump {
        ($n:expr) => {{
            for _ in 0..$n {
                if chars[i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                i += 1;
            }
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        let next = chars.get(i + 1).copied();
        if c.is_whitespace() {
            bump!(1);
            continue;
        }
        if c == '/' && next == Some('/') {
            while i < chars.len() && chars[i] != '\n' {
                bump!(1);
            }
            continue;
        }
        let simple = match c {
            ';' => Some(Tok::Semi),
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            toks.push((tok, pos));
            bump!(1);
            continue;
        }
        if c == '=' && next == Some('=') {
            toks.push((Tok::EqEq, pos));
            bump!(2);
            continue;
        }
        if c == '&' && next == Some('&') {
            toks.push((Tok::AndAnd, pos));
            bump!(2);
            continue;
        }
        if c == '|' && next == Some('-') && chars.get(i + 2) == Some(&'>') {
            toks.push((Tok::Implies, pos));
            bump!(3);
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                bump!(1);
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let hex = c == '0' && matches!(next, Some('x' | 'X'));
            if hex {
                bump!(2);
            }
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                bump!(1);
            }
            let digits: String = chars[start..i].iter().filter(|&&c| c != '_').collect();
            let value = if hex {
                u64::from_str_radix(&digits, 16)
            } else {
                digits.parse::<u64>()
            };
            let raw: String = chars[start..i].iter().collect();
            let value = value.map_err(|e| {
                let kind = if digits.is_empty()
                    || !digits.chars().all(|c| if hex { c.is_ascii_hexdigit() } else { c.is_ascii_digit() })
                {
                    "malformed integer literal".to_string()
                } else {
                    format!("integer literal out of range ({e})")
                };
                Error::parse(ParseErrorKind::Lexical, pos, format!("{kind}: `{}{raw}`", if hex { "0x" } else { "" }))
            })?;
            toks.push((Tok::Int(value), pos));
            continue;
        }
        return Err(Error::parse(
            ParseErrorKind::Lexical,
            pos,
            format!("unexpected character `{c}`"),
        ));
    }
    toks.push((Tok::Eof, Pos { line, column: col }));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser { toks: lex(text)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.at + offset).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn advance(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, expected: &str) -> Result<T> {
        Err(Error::parse(
            ParseErrorKind::Syntax,
            self.pos(),
            format!("expected {expected}, found {}", self.peek().describe()),
        ))
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos> {
        if *self.peek() == tok {
            Ok(self.advance().1)
        } else {
            self.syntax(&tok.describe())
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Pos> {
        match self.peek() {
            Tok::Ident(s) if s == kw => Ok(self.advance().1),
            _ => self.syntax(&format!("`{kw}`")),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let pos = self.advance().1;
                Ok((s, pos))
            }
            _ => self.syntax(what),
        }
    }

    fn file(&mut self) -> Result<(PropertyFile, Vec<Pos>, Vec<Pos>)> {
        let mut file = PropertyFile::default();
        let mut prop_pos = Vec::new();
        let mut dir_pos = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(s) if s == "property" => {
                    let (p, pos) = self.prop_decl()?;
                    file.properties.push(p);
                    prop_pos.push(pos);
                }
                Tok::Ident(s) if role_of(&s).is_some() => {
                    let pos = self.pos();
                    file.directives.push(self.directive(None)?);
                    dir_pos.push(pos);
                }
                Tok::Ident(_) if *self.peek_at(1) == Tok::Colon => {
                    let pos = self.pos();
                    let (label, _) = self.ident("a directive label")?;
                    self.expect(Tok::Colon)?;
                    file.directives.push(self.directive(Some(label))?);
                    dir_pos.push(pos);
                }
                _ => return self.syntax("`property`, a directive, or end of input"),
            }
        }
        Ok((file, prop_pos, dir_pos))
    }

    fn prop_decl(&mut self) -> Result<(Property, Pos)> {
        self.expect_keyword("property")?;
        let (name, pos) = self.ident("a property name")?;
        self.expect(Tok::Semi)?;
        let antecedent = self.expr()?;
        self.expect(Tok::Implies)?;
        let consequent = self.expr()?;
        self.expect(Tok::Semi)?;
        self.expect_keyword("endproperty")?;
        Ok((
            Property {
                name,
                antecedent,
                consequent,
            },
            pos,
        ))
    }

    fn directive(&mut self, label: Option<String>) -> Result<Directive> {
        let role = match self.peek() {
            Tok::Ident(s) => role_of(s),
            _ => None,
        };
        let Some(role) = role else {
            return self.syntax("`assert`, `assume` or `cover`");
        };
        self.advance();
        self.expect_keyword("property")?;
        self.expect(Tok::LParen)?;
        let (target, _) = self.ident("a property name")?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::Semi)?;
        Ok(Directive {
            label,
            role,
            target,
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        while *self.peek() == Tok::AndAnd {
            self.advance();
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            Expr::And(terms)
        })
    }

    fn term(&mut self) -> Result<Expr> {
        match self.peek() {
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Paren(Box::new(inner)))
            }
            Tok::Int(1) if *self.peek_at(1) != Tok::EqEq => {
                self.advance();
                Ok(Expr::True)
            }
            _ => {
                let lhs = self.atom()?;
                self.expect(Tok::EqEq)?;
                let rhs = self.atom()?;
                Ok(Expr::Eq(lhs, rhs))
            }
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.advance();
                Ok(Atom::Literal(v))
            }
            Tok::Ident(ns) => {
                let Some(ns) = Namespace::from_name(&ns) else {
                    return self.syntax("`impl`, `spec` or an integer literal");
                };
                self.advance();
                self.expect(Tok::Dot)?;
                let (name, pos) = match self.peek().clone() {
                    Tok::Ident(s) => (s, self.advance().1),
                    _ => return self.syntax("a signal name"),
                };
                let signal = Signal::from_name(&name).ok_or_else(|| {
                    Error::parse(
                        ParseErrorKind::UnknownSignal,
                        pos,
                        format!("`{name}` is not in the signal dictionary"),
                    )
                })?;
                Ok(Atom::Signal(SignalRef { ns, signal }))
            }
            _ => self.syntax("a signal reference or integer literal"),
        }
    }
}

fn role_of(s: &str) -> Option<Role> {
    match s {
        "assert" => Some(Role::Assert),
        "assume" => Some(Role::Assume),
        "cover" => Some(Role::Cover),
        _ => None,
    }
}

/// Parses a property text and resolves directive targets.
pub fn parse(text: &str) -> Result<PropertyFile> {
    let mut parser = Parser::new(text)?;
    let (file, prop_pos, dir_pos) = parser.file()?;

    let mut declared = HashMap::new();
    for (p, pos) in file.properties.iter().zip(&prop_pos) {
        if declared.insert(p.name.as_str(), *pos).is_some() {
            return Err(Error::parse(
                ParseErrorKind::DuplicateProperty,
                *pos,
                format!("property `{}` is already declared", p.name),
            ));
        }
    }
    let mut targeted = HashSet::new();
    let mut names = HashSet::new();
    for (d, pos) in file.directives.iter().zip(&dir_pos) {
        if !declared.contains_key(d.target.as_str()) {
            return Err(Error::parse(
                ParseErrorKind::DanglingDirective,
                *pos,
                format!("directive targets undeclared property `{}`", d.target),
            ));
        }
        if !targeted.insert(d.target.as_str()) {
            return Err(Error::parse(
                ParseErrorKind::DuplicateDirective,
                *pos,
                format!("property `{}` is already targeted by a directive", d.target),
            ));
        }
        if !names.insert(d.name()) {
            return Err(Error::parse(
                ParseErrorKind::DuplicateDirective,
                *pos,
                format!("directive name `{}` is already used", d.name()),
            ));
        }
    }
    Ok(file)
}

/// Parses a standalone expression, as used by cover-item watches.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut parser = Parser::new(text)?;
    let expr = parser.expr()?;
    if *parser.peek() != Tok::Eof {
        return parser.syntax("end of expression");
    }
    Ok(expr)
}
