//! Discrepancy ledger: records of closed formulas disagreeing with exact
//! computation, and the shipped allowlist of known errata.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::bound::Number;

const KNOWN_ERRATA_JSON: &str = include_str!("../data/known_errata.json");

/// Parameters identifying a record. Absent fields are omitted from JSON.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LedgerParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rtilde: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl LedgerParams {
    pub fn level(ell: u64, nu: u32) -> Self {
        LedgerParams {
            ell: Some(ell),
            nu: Some(nu),
            ..Default::default()
        }
    }

    pub fn with_mu(mut self, mu: i64) -> Self {
        self.mu = Some(mu);
        self
    }

    pub fn with_m(mut self, m: i64) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerRecord {
    pub method: String,
    pub params: LedgerParams,
    pub paper_value: Number,
    pub oracle_value: Number,
    pub delta: Number,
}

impl LedgerRecord {
    pub fn integer(method: &str, params: LedgerParams, paper: i64, oracle: i64) -> Self {
        LedgerRecord {
            method: method.into(),
            params,
            paper_value: paper.into(),
            oracle_value: oracle.into(),
            delta: (oracle - paper).into(),
        }
    }

    pub fn real(method: &str, params: LedgerParams, paper: f64, oracle: f64) -> Self {
        LedgerRecord {
            method: method.into(),
            params,
            paper_value: paper.into(),
            oracle_value: oracle.into(),
            delta: (oracle - paper).into(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_value(self).expect("serialisable").to_string()
    }
}

fn cmp_opt_f64(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        _ => a.is_some().cmp(&b.is_some()),
    }
}

/// Order by `(method, ell, nu, mu, m)`, then the remaining parameters.
pub fn record_order(a: &LedgerRecord, b: &LedgerRecord) -> Ordering {
    let (p, r) = (&a.params, &b.params);
    a.method
        .cmp(&b.method)
        .then(p.ell.cmp(&r.ell))
        .then(p.nu.cmp(&r.nu))
        .then(p.mu.cmp(&r.mu))
        .then(p.m.cmp(&r.m))
        .then(p.q.cmp(&r.q))
        .then(cmp_opt_f64(p.rtilde, r.rtilde))
        .then(p.detail.cmp(&r.detail))
}

pub fn sort_records(records: &mut [LedgerRecord]) {
    records.sort_by(record_order);
}

/// JSON lines, sorted, each terminated by LF.
pub fn to_json_lines(records: &[LedgerRecord]) -> String {
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    sorted.iter().map(|r| r.to_json_line() + "\n").collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErratumRule {
    /// Every disagreement under this method is expected.
    Any,
    /// Expected only when `delta = ell^{nu-1} - mu`.
    PropmuConjecture,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct KnownErratum {
    pub method: String,
    pub rule: ErratumRule,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct KnownErrata {
    pub version: u32,
    pub entries: Vec<KnownErratum>,
}

impl KnownErrata {
    pub fn shipped() -> Self {
        serde_json::from_str(KNOWN_ERRATA_JSON).expect("shipped errata file is valid")
    }

    /// Whether `record` is an expected disagreement.
    pub fn is_known(&self, record: &LedgerRecord) -> bool {
        let Some(entry) = self.entries.iter().find(|e| e.method == record.method) else {
            return false;
        };
        match entry.rule {
            ErratumRule::Any => true,
            ErratumRule::PropmuConjecture => {
                let p = &record.params;
                let (Some(ell), Some(nu), Some(mu)) = (p.ell, p.nu, p.mu) else {
                    return false;
                };
                let Some(top) = (ell as i64).checked_pow(nu - 1) else {
                    return false;
                };
                matches!(record.delta, Number::Int(d) if d == top - mu)
            }
        }
    }
}
