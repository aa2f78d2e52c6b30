//! Weierstrass semigroups `H(Q_nu)` of the tower, stored below the conductor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tower::{conductor, TowerParams, MAX_TABLE_CONDUCTOR};

/// A cofinite numerical semigroup, stored as its elements below the conductor
/// plus an O(1) membership index over `[0, conductor)`.
///
/// Everything at or above the conductor is a member implicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupTable {
    params: TowerParams,
    conductor: i64,
    small_elements: Vec<i64>,
    member: Vec<bool>,
}

/// Canonical serialised form of a [`SemigroupTable`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupDoc {
    pub ell: u64,
    pub nu: u32,
    pub conductor: i64,
    pub small_elements: Vec<i64>,
    pub gaps: i64,
}

fn table_conductor(params: TowerParams) -> Result<i64> {
    let c = conductor(params)?;
    if c > MAX_TABLE_CONDUCTOR {
        return Err(Error::ParameterTooLarge(format!(
            "conductor {c} of H(Q_{}) over ell = {} exceeds the table limit {MAX_TABLE_CONDUCTOR}",
            params.nu(),
            params.ell()
        )));
    }
    Ok(c as i64)
}

/// Builds `H(Q_nu)` from `H(Q_1) = N_0` and
/// `H(Q_nu) = ell * H(Q_{nu-1}) ∪ [c_nu, ∞)`.
pub fn build_recursive(params: TowerParams) -> Result<SemigroupTable> {
    // Validate the final size before doing any work.
    let final_c = table_conductor(params)?;
    let ell = params.ell() as i64;

    // Level 1 is N_0: conductor 0 and nothing stored.
    let mut prev_c: i64 = 0;
    let mut prev_member: Vec<bool> = Vec::new();
    for level in 2..=params.nu() {
        let lp = TowerParams::new(params.ell(), level)?;
        let c = table_conductor(lp)?;
        let mut member = vec![false; c as usize];
        let mut x = 0;
        while x < c {
            let y = x / ell;
            if y >= prev_c || prev_member[y as usize] {
                member[x as usize] = true;
            }
            x += ell;
        }
        prev_c = c;
        prev_member = member;
    }
    debug_assert_eq!(prev_c, final_c);

    let small_elements = prev_member
        .iter()
        .enumerate()
        .filter_map(|(i, &m)| m.then_some(i as i64))
        .collect();
    Ok(SemigroupTable {
        params,
        conductor: prev_c,
        small_elements,
        member: prev_member,
    })
}

impl SemigroupTable {
    /// Rebuilds a table from its canonical document, checking only the
    /// structural invariants (sorted, in range, contains 0, gap count).
    /// Whether the set is really `H(Q_nu)` is left to the verification suite.
    pub fn from_doc(doc: &SemigroupDoc) -> Result<Self> {
        let params = TowerParams::new(doc.ell, doc.nu)?;
        let c = doc.conductor;
        if c < 0 || c as i128 > MAX_TABLE_CONDUCTOR {
            return Err(Error::InvalidParams(format!("conductor {c} out of range")));
        }
        if !doc.small_elements.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParams(
                "small_elements must be strictly increasing".into(),
            ));
        }
        if doc.small_elements.iter().any(|&x| x < 0 || x >= c) {
            return Err(Error::InvalidParams(
                "small_elements must lie in [0, conductor)".into(),
            ));
        }
        if c > 0 && doc.small_elements.first() != Some(&0) {
            return Err(Error::InvalidParams("0 must be an element".into()));
        }
        if doc.gaps != c - doc.small_elements.len() as i64 {
            return Err(Error::InvalidParams(format!(
                "gaps = {} inconsistent with conductor and small_elements",
                doc.gaps
            )));
        }
        let mut member = vec![false; c as usize];
        for &x in &doc.small_elements {
            member[x as usize] = true;
        }
        Ok(SemigroupTable {
            params,
            conductor: c,
            small_elements: doc.small_elements.clone(),
            member,
        })
    }

    pub fn to_doc(&self) -> SemigroupDoc {
        SemigroupDoc {
            ell: self.params.ell(),
            nu: self.params.nu(),
            conductor: self.conductor,
            small_elements: self.small_elements.clone(),
            gaps: self.gaps(),
        }
    }

    /// Compact JSON with keys in sorted order.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self.to_doc()).expect("doc is always serialisable");
        value.to_string()
    }

    pub fn params(&self) -> TowerParams {
        self.params
    }

    pub fn conductor(&self) -> i64 {
        self.conductor
    }

    pub fn small_elements(&self) -> &[i64] {
        &self.small_elements
    }

    /// Number of gaps, i.e. positive integers outside the semigroup. This is
    /// the genus used by every downstream bound.
    pub fn gaps(&self) -> i64 {
        self.conductor - self.small_elements.len() as i64
    }

    #[inline]
    pub fn contains(&self, x: i64) -> bool {
        if x < 0 {
            false
        } else if x >= self.conductor {
            true
        } else {
            self.member[x as usize]
        }
    }

    /// `#(H ∩ (0, x])`.
    pub fn count_upto(&self, x: i64) -> i64 {
        if x <= 0 {
            return 0;
        }
        // small_elements[0] == 0 whenever it is non-empty.
        let below_c = if x < self.conductor {
            self.small_elements.partition_point(|&e| e <= x)
        } else {
            self.small_elements.len()
        } as i64;
        let nonzero_small = below_c - i64::from(!self.small_elements.is_empty());
        let tail = if x >= self.conductor {
            // [max(c, 1), x]
            x - self.conductor.max(1) + 1
        } else {
            0
        };
        nonzero_small + tail
    }

    /// Dimension of the one-point code `C_L(D, mu Q)` of length `n`, namely
    /// `#(H ∩ [0, mu])`, valid for `-1 <= mu < n`.
    pub fn dimension(&self, mu: i64, n: i64) -> Result<i64> {
        if n < 1 {
            return Err(Error::InvalidParams(format!("length n = {n} must be positive")));
        }
        if mu >= n {
            return Err(Error::LengthConstraint { mu, n });
        }
        if mu < -1 {
            return Err(Error::InvalidParams(format!("mu = {mu} must be >= -1")));
        }
        Ok(if mu < 0 { 0 } else { self.count_upto(mu) + 1 })
    }

    /// First pair `(x, y)` of stored elements whose sum lies below the
    /// conductor but outside the set, if any.
    pub fn additive_closure_violation(&self) -> Option<(i64, i64)> {
        for (i, &x) in self.small_elements.iter().enumerate() {
            for &y in &self.small_elements[i..] {
                let s = x + y;
                if s >= self.conductor {
                    break;
                }
                if !self.contains(s) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Membership of every integer in `[0, upper]`.
    pub fn membership_vector(&self, upper: i64) -> Vec<bool> {
        (0..=upper).map(|x| self.contains(x)).collect()
    }
}
