//! Closed-form construction of `H(Q_nu)` for even `nu` as a union of the
//! sets `S^0, ..., S^{nu/2}` and the tail `[c_nu + 1, ∞)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tower::{conductor, TowerParams, MAX_TABLE_CONDUCTOR};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SSetDecomposition {
    pub ell: u64,
    pub nu: u32,
    /// `floor(nu / 2)`; the sets are indexed `0..=j_half`.
    pub j_half: u32,
    pub sets: Vec<Vec<i64>>,
    pub s_infinity_start: i64,
}

/// A failed spacing or cardinality property of the decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaViolation {
    pub property: u8,
    pub set_index: u32,
    pub detail: String,
}

pub fn build_explicit(params: TowerParams) -> Result<SSetDecomposition> {
    if !params.is_even_level() {
        return Err(Error::OddLevel { nu: params.nu() });
    }
    let c = conductor(params)?;
    if c > MAX_TABLE_CONDUCTOR {
        return Err(Error::ParameterTooLarge(format!(
            "conductor {c} exceeds the table limit {MAX_TABLE_CONDUCTOR}"
        )));
    }
    let nu = params.nu();
    let j_half = nu / 2;
    let j = 2 * j_half;
    let top = params.ell_pow(j)?;

    let mut sets = vec![vec![0i64]];
    for i in 1..=j_half {
        let count = params.ell_pow(i)? - params.ell_pow(i - 1)?;
        let base = top - params.ell_pow(nu - i + 1)?;
        let step = params.ell_pow(nu + 1 - 2 * i)?;
        let set = (1..=count).map(|k| (base + k * step) as i64).collect();
        sets.push(set);
    }
    Ok(SSetDecomposition {
        ell: params.ell(),
        nu,
        j_half,
        sets,
        s_infinity_start: c as i64 + 1,
    })
}

impl SSetDecomposition {
    fn params(&self) -> TowerParams {
        TowerParams::new(self.ell, self.nu).expect("built from valid parameters")
    }

    /// Conductor implied by the decomposition.
    pub fn conductor(&self) -> i64 {
        self.s_infinity_start - 1
    }

    /// Membership in `S^0 ∪ ... ∪ S^{j_half} ∪ {c} ∪ [c+1, ∞)` for every
    /// integer in `[0, upper]`.
    pub fn membership_vector(&self, upper: i64) -> Vec<bool> {
        let mut member = vec![false; (upper + 1).max(0) as usize];
        for &x in self.sets.iter().flatten() {
            if (0..=upper).contains(&x) {
                member[x as usize] = true;
            }
        }
        let from = self.conductor().max(0);
        for x in from..=upper {
            member[x as usize] = true;
        }
        member
    }

    /// Checks the five structural properties of the decomposition:
    /// disjointness, cumulative cardinality `ell^i`, intra-set step
    /// `ell^{nu-2i+1}`, the same step across consecutive sets, and that step
    /// as a lower bound on any difference within `S^0 ∪ ... ∪ S^i`.
    pub fn lemma_violations(&self) -> Vec<LemmaViolation> {
        let params = self.params();
        let mut out = Vec::new();
        let pow = |e: u32| params.ell_pow(e).expect("checked at construction") as i64;

        // 1: pairwise disjoint, including the tail.
        let mut all: Vec<(i64, u32)> = self
            .sets
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&x| (x, i as u32)))
            .collect();
        all.sort_unstable();
        for w in all.windows(2) {
            if w[0].0 == w[1].0 {
                out.push(LemmaViolation {
                    property: 1,
                    set_index: w[1].1,
                    detail: format!("{} lies in S^{} and S^{}", w[0].0, w[0].1, w[1].1),
                });
            }
        }
        for (i, s) in self.sets.iter().enumerate() {
            if let Some(&x) = s.iter().find(|&&x| x >= self.s_infinity_start) {
                out.push(LemmaViolation {
                    property: 1,
                    set_index: i as u32,
                    detail: format!("{x} of S^{i} meets the tail"),
                });
            }
        }

        let mut cumulative = 0i64;
        for i in 0..=self.j_half {
            let set = &self.sets[i as usize];
            cumulative += set.len() as i64;
            if i == 0 {
                continue;
            }
            // 2: cardinalities.
            let expected = pow(i) - pow(i - 1);
            if set.len() as i64 != expected || cumulative != pow(i) {
                out.push(LemmaViolation {
                    property: 2,
                    set_index: i,
                    detail: format!(
                        "|S^{i}| = {}, cumulative {cumulative}; expected {expected}, {}",
                        set.len(),
                        pow(i)
                    ),
                });
            }
            let step = pow(self.nu + 1 - 2 * i);
            // 3: consecutive elements inside S^i.
            if let Some(w) = set.windows(2).find(|w| w[1] - w[0] != step) {
                out.push(LemmaViolation {
                    property: 3,
                    set_index: i,
                    detail: format!("{} - {} != {step}", w[1], w[0]),
                });
            }
            // 4: first of S^i against last of S^{i-1}.
            let prev_last = *self.sets[i as usize - 1].last().expect("sets are non-empty");
            if let Some(&first) = set.first() {
                if first - prev_last != step {
                    out.push(LemmaViolation {
                        property: 4,
                        set_index: i,
                        detail: format!("{first} - {prev_last} != {step}"),
                    });
                }
            }
            // 5: minimum difference over the union up to S^i.
            let mut union: Vec<i64> = self.sets[..=i as usize].iter().flatten().copied().collect();
            union.sort_unstable();
            if let Some(w) = union.windows(2).find(|w| w[1] - w[0] < step) {
                out.push(LemmaViolation {
                    property: 5,
                    set_index: i,
                    detail: format!("{} - {} < {step}", w[1], w[0]),
                });
            }
        }
        out
    }
}
