//! JSON-lines corpus files: one judgement (or non-judgement) per line.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Term, Type};
use crate::typing::{check, Contexts, Judgement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expect {
    #[serde(rename = "well-typed")]
    WellTyped,
    #[serde(rename = "ill-typed")]
    IllTyped,
}

impl fmt::Display for Expect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expect::WellTyped => "well-typed",
            Expect::IllTyped => "ill-typed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusLine {
    #[serde(default)]
    pub ctx_gamma: BTreeMap<String, Type>,
    #[serde(default)]
    pub ctx_delta: BTreeMap<String, Type>,
    pub term: Term,
    #[serde(rename = "type")]
    pub ty: Type,
    pub expect: Expect,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CorpusLine {
    pub fn from_judgement(j: &Judgement) -> CorpusLine {
        CorpusLine {
            ctx_gamma: j.ctx().gamma.clone(),
            ctx_delta: j.ctx().delta.clone(),
            term: j.term().clone(),
            ty: j.ty().clone(),
            expect: Expect::WellTyped,
        }
    }

    pub fn contexts(&self) -> Contexts {
        Contexts { gamma: self.ctx_gamma.clone(), delta: self.ctx_delta.clone() }
    }

    /// Whether the line's term checks against its type.
    pub fn is_well_typed(&self) -> bool {
        check(&self.contexts(), &self.term, &self.ty).is_ok()
    }

    /// The typing verdict agrees with `expect`.
    pub fn holds(&self) -> bool {
        self.is_well_typed() == (self.expect == Expect::WellTyped)
    }
}

pub fn write_corpus(lines: &[CorpusLine], mut out: impl Write) -> std::io::Result<()> {
    for l in lines {
        serde_json::to_writer(&mut out, l)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads a corpus, skipping blank lines.
pub fn read_corpus(input: impl BufRead) -> Result<Vec<CorpusLine>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str(&line).map_err(|e| CorpusError::Line { line: i + 1, message: e.to_string() })?;
        out.push(parsed);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_line_parses_and_holds() {
        let src = r#"{"term":"\\x:P. x","type":"P -> P","expect":"well-typed"}"#;
        let lines = read_corpus(src.as_bytes()).unwrap();
        assert!(lines[0].holds());
    }

    #[test]
    fn ill_typed_expectation_on_typable_term_fails() {
        let src = r#"{"ctx_gamma":{"y":"P"},"term":"y","type":"P","expect":"ill-typed"}"#;
        assert!(!read_corpus(src.as_bytes()).unwrap()[0].holds());
    }

    #[test]
    fn round_trip_keeps_field_order() {
        let src = r#"{"ctx_gamma":{"x":"P"},"ctx_delta":{"a":"Q"},"term":"mu b:Q. [a] (mu c:Q. [b] x)","type":"Q","expect":"ill-typed"}"#;
        let lines = read_corpus(src.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_corpus(&lines, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim_end(), src);
    }

    #[test]
    fn bad_line_reports_its_number() {
        let src = "\n{\"term\":\"x\",\"type\":\"P\",\"expect\":\"well-typed\"}\n{\"term\":\"(\",\"type\":\"P\",\"expect\":\"well-typed\"}\n";
        match read_corpus(src.as_bytes()) {
            Err(CorpusError::Line { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
