//! Ramp secret-sharing thresholds from relative generalized Hamming weights.
//!
//! `r_m = n - M_{ell-m+1}(C1, C2) + 1` shares always recover `m` q-bits and
//! `t_m = M_m(C2^⊥, C1^⊥) - 1` shares never reveal `m` q-bits. Dual
//! parameters are never derived here; they are supplied by the caller.

use serde::Serialize;

use crate::bound::BoundKind;
use crate::closed::highest_rghw;
use crate::error::{Error, Result};
use crate::rghw::{rghw_lower_exact, CodePairSpec, ZOptions};
use crate::semigroup::SemigroupTable;

/// One entry of a bound vector with the method that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub value: i64,
    pub method: String,
}

impl BoundEntry {
    pub fn new(value: i64, method: impl Into<String>) -> Self {
        BoundEntry {
            value,
            method: method.into(),
        }
    }

    /// Entries tagged `user-supplied`.
    pub fn user_vector(values: &[i64]) -> Vec<BoundEntry> {
        values.iter().map(|&v| BoundEntry::new(v, "user-supplied")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RampReport {
    pub n: i64,
    pub ell: usize,
    pub r_upper: Vec<i64>,
    pub t_lower: Vec<i64>,
    pub assumptions: Vec<String>,
}

fn check_vector(n: i64, what: &str, m: &[i64]) -> Result<()> {
    if m.is_empty() {
        return Err(Error::InvalidParams(format!("{what} vector is empty")));
    }
    for (i, &v) in m.iter().enumerate() {
        if !(1..=n).contains(&v) {
            return Err(Error::Invariant {
                index: i + 1,
                detail: format!("{what}[{}] = {v} outside [1, n = {n}]", i + 1),
            });
        }
        if i > 0 && v < m[i - 1] {
            return Err(Error::Invariant {
                index: i + 1,
                detail: format!(
                    "{what} not nondecreasing: {what}[{}] = {} > {what}[{}] = {v}",
                    i,
                    m[i - 1],
                    i + 1
                ),
            });
        }
    }
    Ok(())
}

/// `r_m = n - M[ell - m + 1] + 1` for `m = 1..ell`, with `ell = M.len()`.
pub fn reconstruction_bounds(n: i64, m_primal_lower: &[i64]) -> Result<Vec<i64>> {
    check_vector(n, "M_primal", m_primal_lower)?;
    Ok(m_primal_lower.iter().rev().map(|&m| n - m + 1).collect())
}

/// Inverse of [`reconstruction_bounds`].
pub fn invert_reconstruction(n: i64, r_upper: &[i64]) -> Vec<i64> {
    r_upper.iter().rev().map(|&r| n - r + 1).collect()
}

/// `t_m = M_dual[m] - 1`.
pub fn privacy_bounds(n: i64, m_dual_lower: &[i64]) -> Result<Vec<i64>> {
    check_vector(n, "M_dual", m_dual_lower)?;
    Ok(m_dual_lower.iter().map(|&m| m - 1).collect())
}

/// Lower bounds on `M_1, ..., M_ell` for a one-point pair: enumeration of
/// `Z` below the top index, and the highest-RGHW bound at `m = ell`.
pub fn pair_vector(pair: &CodePairSpec, table: &SemigroupTable, opts: ZOptions) -> Result<Vec<BoundEntry>> {
    let ell = pair.ell_cd;
    if ell < 1 {
        return Err(Error::Precondition("codimension must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(ell as usize);
    for m in 1..ell {
        let b = rghw_lower_exact(pair, table, m, opts)?;
        out.push(BoundEntry::new(b.as_i64().expect("integral"), b.method));
    }
    let top = highest_rghw(pair, table, opts)?;
    let tag = if top.lower.kind == BoundKind::Exact {
        format!("{}+singleton-exact", top.lower.method)
    } else {
        top.lower.method.clone()
    };
    out.push(BoundEntry::new(top.lower.as_i64().expect("integral"), tag));
    Ok(out)
}

/// Dual-side input: either a bound vector or a pair of pole orders that the
/// caller asserts describes `C2^⊥ ⊃ C1^⊥` as one-point codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualInput {
    Vector(Vec<BoundEntry>),
    AssertedPair { mu1: i64, mu2: i64 },
}

/// Assembles both threshold vectors and checks `t_m < r_m`.
pub fn scheme_report(n: i64, primal: &[BoundEntry], dual: &[BoundEntry]) -> Result<RampReport> {
    if primal.len() != dual.len() {
        return Err(Error::InvalidParams(format!(
            "primal and dual vectors differ in length ({} vs {})",
            primal.len(),
            dual.len()
        )));
    }
    let mp: Vec<i64> = primal.iter().map(|e| e.value).collect();
    let md: Vec<i64> = dual.iter().map(|e| e.value).collect();
    let r_upper = reconstruction_bounds(n, &mp)?;
    let t_lower = privacy_bounds(n, &md)?;
    let ell = mp.len();

    for m in 1..=ell {
        let (r, t) = (r_upper[m - 1], t_lower[m - 1]);
        if t >= r {
            return Err(Error::Invariant {
                index: m,
                detail: format!("t_{m} = {t} >= r_{m} = {r}"),
            });
        }
    }

    let mut assumptions = Vec::with_capacity(2 * ell);
    for m in 1..=ell {
        let src = &primal[ell - m];
        assumptions.push(format!(
            "r_{m} = n - M_{} + 1 with M_{} >= {} ({})",
            ell - m + 1,
            ell - m + 1,
            src.value,
            src.method
        ));
    }
    for m in 1..=ell {
        let src = &dual[m - 1];
        assumptions.push(format!(
            "t_{m} = M_{m}(dual) - 1 with M_{m}(dual) >= {} ({})",
            src.value, src.method
        ));
    }
    Ok(RampReport {
        n,
        ell,
        r_upper,
        t_lower,
        assumptions,
    })
}

/// End-to-end report for a one-point pair.
pub fn pair_report(
    pair: &CodePairSpec,
    dual: &DualInput,
    table: &SemigroupTable,
    opts: ZOptions,
) -> Result<RampReport> {
    let primal = pair_vector(pair, table, opts)?;
    let (dual_vec, note) = match dual {
        DualInput::Vector(v) => (v.clone(), None),
        DualInput::AssertedPair { mu1, mu2 } => {
            let dp = CodePairSpec::new(pair.n, *mu1, *mu2, table)?;
            if dp.ell_cd != pair.ell_cd {
                return Err(Error::InvalidParams(format!(
                    "dual pair codimension {} differs from primal codimension {}",
                    dp.ell_cd, pair.ell_cd
                )));
            }
            let v = pair_vector(&dp, table, opts)?;
            let note = format!(
                "user asserts C2^⊥ = C_L(D, {mu1} Q) and C1^⊥ = C_L(D, {mu2} Q)"
            );
            (v, Some(note))
        }
    };
    let mut report = scheme_report(pair.n, &primal, &dual_vec)?;
    report.assumptions.insert(
        0,
        format!(
            "primal pair n = {}, mu1 = {}, mu2 = {}, k1 = {}, k2 = {}",
            pair.n, pair.mu1, pair.mu2, pair.k1, pair.k2
        ),
    );
    if let Some(note) = note {
        report.assumptions.insert(1, note);
    }
    Ok(report)
}
