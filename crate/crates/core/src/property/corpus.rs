// SPDX-License-Identifier: Apache-2.0

//! Built-in property texts.

use crate::error::{Error, Result};

pub const CORPUS_NAMES: [&str; 3] = ["handwritten-lemma1", "handwritten-lemma2", "theorem-split3"];

pub fn corpus(name: &str) -> Result<&'static str> {
    match name {
        "handwritten-lemma1" => Ok(include_str!("corpora/handwritten-lemma1.prop")),
        "handwritten-lemma2" => Ok(include_str!("corpora/handwritten-lemma2.prop")),
        "theorem-split3" => Ok(include_str!("corpora/theorem-split3.prop")),
        _ => Err(Error::Config(format!(
            "unknown corpus `{name}`; available: {}",
            CORPUS_NAMES.join(", ")
        ))),
    }
}
