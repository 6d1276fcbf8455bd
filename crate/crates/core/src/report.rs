//! Verdict records produced by every condition checker.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of a check on the sampled evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Neither branch of the numeric protocol was reached.
    InconclusiveNumeric,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::InconclusiveNumeric => "inconclusive-numeric",
        })
    }
}

/// A sampled point together with the quantity measured there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub point: f64,
    /// Second coordinate for pair-valued witnesses such as `(s, t)`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pair: Option<f64>,
    pub value: f64,
}

impl Witness {
    pub fn new(point: f64, value: f64) -> Self {
        Self { point, pair: None, value }
    }

    pub fn pair(s: f64, t: f64, value: f64) -> Self {
        Self { point: s, pair: Some(t), value }
    }
}

/// Result of a condition check.
///
/// `asymptotic` marks reports whose verdict only describes finite-horizon
/// samples of an asymptotic statement; such reports are labelled
/// `inconclusive-numeric` when serialized regardless of the verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub witness: Vec<Witness>,
    pub extremum: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selected_m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub parameters: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

pub const NUMERIC_LABEL: &str = "inconclusive-numeric";

impl CheckReport {
    pub fn new(check: impl Into<String>, verdict: Verdict, extremum: f64) -> Self {
        Self {
            check: check.into(),
            verdict,
            label: None,
            witness: Vec::new(),
            // an empty float sum is -0.0; report it as 0
            extremum: extremum + 0.0,
            selected_m: None,
            bound: None,
            parameters: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Mark the report as finite-horizon evidence for an asymptotic claim.
    pub fn numeric(mut self) -> Self {
        self.label = Some(NUMERIC_LABEL.to_string());
        self
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn with_witness(mut self, witness: Vec<Witness>) -> Self {
        self.witness = witness;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn is_numeric(&self) -> bool {
        self.label.as_deref() == Some(NUMERIC_LABEL)
    }
}
