//! Line-oriented corpus of formulas with expected statuses.
//!
//! Each non-blank line not starting with `#` has the form
//! `<valid|invalid> <iel|iel-> <formula>`.

use std::fmt;

use thiserror::Error;

use crate::formula::{parse, Formula};
use crate::sequent::Logic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub line: usize,
    pub expected_valid: bool,
    pub logic: Logic,
    pub formula: Formula,
}

impl fmt::Display for CorpusEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.expected_valid { "valid" } else { "invalid" };
        write!(f, "{status} {} {}", self.logic, self.formula)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct CorpusError {
    pub line: usize,
    pub message: String,
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |message: String| CorpusError { line, message };
        let mut parts = trimmed.splitn(3, char::is_whitespace);
        let status = parts.next().unwrap_or_default();
        let logic = parts.next().unwrap_or_default();
        let formula = parts.next().unwrap_or_default().trim();
        let expected_valid = match status {
            "valid" => true,
            "invalid" => false,
            other => return Err(err(format!("expected valid or invalid, found {other:?}"))),
        };
        let logic: Logic = logic.parse().map_err(|e| err(format!("{e}")))?;
        let formula = parse(formula).map_err(|e| err(format!("{e}")))?;
        out.push(CorpusEntry {
            line,
            expected_valid,
            logic,
            formula,
        });
    }
    Ok(out)
}
