use std::fmt;

use serde::Serialize;

/// Whether a reported number is the true value or one side of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Exact,
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Real(f64),
}

impl Number {
    pub fn as_f64(self) -> f64 {
        match self {
            Number::Int(v) => v as f64,
            Number::Real(v) => v,
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Int(v) => write!(f, "{v}"),
            Number::Real(v) => write!(f, "{v}"),
        }
    }
}

impl From<i64> for Number {
    fn from(v: i64) -> Self {
        Number::Int(v)
    }
}

impl From<f64> for Number {
    fn from(v: f64) -> Self {
        Number::Real(v)
    }
}

/// Side-by-side record of a closed formula and the exact value it is meant
/// to reproduce. `delta = oracle_value - paper_value`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub paper_value: Number,
    pub oracle_value: Number,
    pub delta: Number,
    pub note: String,
}

impl Discrepancy {
    pub fn integer(paper: i64, oracle: i64, note: impl Into<String>) -> Self {
        Discrepancy {
            paper_value: paper.into(),
            oracle_value: oracle.into(),
            delta: (oracle - paper).into(),
            note: note.into(),
        }
    }

    pub fn real(paper: f64, oracle: f64, note: impl Into<String>) -> Self {
        Discrepancy {
            paper_value: paper.into(),
            oracle_value: oracle.into(),
            delta: (oracle - paper).into(),
            note: note.into(),
        }
    }
}

/// A bound together with how it was obtained and what it assumes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: Number,
    pub kind: BoundKind,
    pub method: String,
    pub assumptions: Vec<String>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<Discrepancy>,
    /// Minimising shift set, for bounds computed by enumeration.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<i64>>,
}

impl BoundValue {
    pub fn new(value: impl Into<Number>, kind: BoundKind, method: &str) -> Self {
        BoundValue {
            value: value.into(),
            kind,
            method: method.to_string(),
            assumptions: Vec::new(),
            discrepancy: None,
            witness: None,
        }
    }

    pub fn assume(mut self, a: impl Into<String>) -> Self {
        self.assumptions.push(a.into());
        self
    }

    pub fn with_discrepancy(mut self, d: Discrepancy) -> Self {
        self.discrepancy = Some(d);
        self
    }

    pub fn with_witness(mut self, w: Vec<i64>) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn as_f64(&self) -> f64 {
        self.value.as_f64()
    }

    /// Integer value, if the bound is integral.
    pub fn as_i64(&self) -> Option<i64> {
        match self.value {
            Number::Int(v) => Some(v),
            Number::Real(_) => None,
        }
    }
}
