//! Exact evaluation of the shifted-gap minimisation `Z(H, mu, m)` that
//! lower-bounds relative generalized Hamming weights of nested one-point
//! codes through `M_m(C1, C2) >= n - mu1 + Z(H, mu1 - mu2, m)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::bound::{BoundKind, BoundValue};
use crate::error::{Error, Result};
use crate::semigroup::SemigroupTable;

pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Strictly increasing negative shifts `i_1 < ... < i_{m-1} <= -1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct ShiftSet(Vec<i64>);

impl ShiftSet {
    pub fn new(shifts: Vec<i64>) -> Result<Self> {
        if !shifts.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParams("shifts must be strictly increasing".into()));
        }
        if shifts.last().is_some_and(|&s| s >= 0) {
            return Err(Error::InvalidParams("shifts must be negative".into()));
        }
        Ok(ShiftSet(shifts))
    }

    /// Like [`ShiftSet::new`], additionally requiring every shift to lie in
    /// `[-(mu-1), -1]`.
    pub fn for_mu(shifts: Vec<i64>, mu: i64) -> Result<Self> {
        let set = Self::new(shifts)?;
        if set.0.first().is_some_and(|&s| s < -(mu - 1)) {
            return Err(Error::InvalidParams(format!(
                "shift {} below -(mu-1) = {}",
                set.0[0],
                -(mu - 1)
            )));
        }
        Ok(set)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }
}

/// `#{ α ∈ ∪_s (i_s + H) : α ∉ H }`. Every counted α lies in
/// `[min(shifts), c)`, so the scan is finite.
pub fn shifted_gap_count(table: &SemigroupTable, shifts: &ShiftSet) -> i64 {
    let Some(&lowest) = shifts.as_slice().first() else {
        return 0;
    };
    (lowest..table.conductor())
        .filter(|&a| !table.contains(a) && shifts.as_slice().iter().any(|&s| table.contains(a - s)))
        .count() as i64
}

/// Controls for the enumeration in [`z_exact`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZOptions {
    /// Maximum estimated number of elementary steps.
    pub budget: u128,
    /// Run even when the estimate exceeds the budget.
    pub force: bool,
    /// Split the search over the first shift across the rayon pool.
    pub parallel: bool,
}

impl Default for ZOptions {
    fn default() -> Self {
        ZOptions {
            budget: DEFAULT_BUDGET,
            force: false,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZResult {
    pub value: i64,
    pub witness: ShiftSet,
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        let Some(num) = acc.checked_mul((n - i) as u128) else {
            return u128::MAX;
        };
        acc = num / (i as u128 + 1);
    }
    acc
}

/// Estimated cost `C(mu-1, m-1) * mu` of the exhaustive search.
pub fn z_exact_estimate(mu: i64, m: i64) -> u128 {
    if m <= 1 || mu < 1 {
        return 0;
    }
    binomial((mu - 1) as u64, (m - 1) as u64).saturating_mul(mu as u128)
}

/// Incremental coverage of `∪ (s + H) \ H` over the window `[-(mu-1), c)`.
struct Coverage<'a> {
    table: &'a SemigroupTable,
    offset: i64,
    cover: Vec<u32>,
    count: i64,
}

impl<'a> Coverage<'a> {
    fn new(table: &'a SemigroupTable, mu: i64) -> Self {
        let offset = mu - 1;
        Coverage {
            table,
            offset,
            cover: vec![0; (offset + table.conductor()).max(0) as usize],
            count: 0,
        }
    }

    /// Calls `f` on the window index of every α in `(s + H) \ H`, `α < c`.
    fn for_each_new(table: &SemigroupTable, offset: i64, s: i64, mut f: impl FnMut(usize)) {
        let c = table.conductor();
        let small = table.small_elements().iter().copied();
        let tail = c..(c - s);
        for h in small.chain(tail) {
            let a = s + h;
            if a >= c {
                break;
            }
            if !table.contains(a) {
                f((a + offset) as usize);
            }
        }
    }

    fn add(&mut self, s: i64) {
        let (cover, count) = (&mut self.cover, &mut self.count);
        Self::for_each_new(self.table, self.offset, s, |i| {
            if cover[i] == 0 {
                *count += 1;
            }
            cover[i] += 1;
        });
    }

    fn remove(&mut self, s: i64) {
        let (cover, count) = (&mut self.cover, &mut self.count);
        Self::for_each_new(self.table, self.offset, s, |i| {
            cover[i] -= 1;
            if cover[i] == 0 {
                *count -= 1;
            }
        });
    }
}

/// Depth-first branch and bound over shift sets in lexicographic order.
/// Keeps the first minimiser found, so ties resolve to the lexicographically
/// smallest shift set.
struct Search<'a> {
    cov: Coverage<'a>,
    need: usize,
    chosen: Vec<i64>,
    best: Option<(i64, Vec<i64>)>,
}

impl Search<'_> {
    fn run(&mut self, from: i64) {
        if let Some((best, _)) = &self.best {
            if self.cov.count >= *best {
                return;
            }
        }
        if self.chosen.len() == self.need {
            self.best = Some((self.cov.count, self.chosen.clone()));
            return;
        }
        let remaining = (self.need - self.chosen.len()) as i64;
        // Leave room for the remaining larger shifts up to -1.
        let last = -remaining;
        for s in from..=last {
            self.cov.add(s);
            self.chosen.push(s);
            self.run(s + 1);
            self.chosen.pop();
            self.cov.remove(s);
        }
    }
}

fn search_from_first(table: &SemigroupTable, mu: i64, m: i64, first: i64) -> (i64, Vec<i64>) {
    let mut search = Search {
        cov: Coverage::new(table, mu),
        need: (m - 1) as usize,
        chosen: vec![first],
        best: None,
    };
    search.cov.add(first);
    search.run(first + 1);
    search.best.expect("at least one completion exists")
}

/// `Z(H, mu, m)`: the minimum of [`shifted_gap_count`] over all shift sets of
/// size `m - 1` inside `[-(mu-1), -1]`, with a minimising witness.
pub fn z_exact(table: &SemigroupTable, mu: i64, m: i64, opts: ZOptions) -> Result<ZResult> {
    if m < 1 || m > mu {
        return Err(Error::Precondition(format!("need 1 <= m <= mu, got m = {m}, mu = {mu}")));
    }
    if m == 1 {
        return Ok(ZResult {
            value: 0,
            witness: ShiftSet::default(),
        });
    }
    let estimate = z_exact_estimate(mu, m);
    if estimate > opts.budget && !opts.force {
        return Err(Error::Workload {
            estimate,
            budget: opts.budget,
        });
    }

    let firsts = -(mu - 1)..=-(m - 1);
    let (value, witness) = if opts.parallel {
        let per_first: Vec<(i64, Vec<i64>)> = firsts
            .into_par_iter()
            .map(|first| search_from_first(table, mu, m, first))
            .collect();
        // min_by_key keeps the first of equal keys, i.e. the smallest first shift.
        per_first
            .into_iter()
            .min_by_key(|(v, _)| *v)
            .expect("non-empty range")
    } else {
        let mut search = Search {
            cov: Coverage::new(table, mu),
            need: (m - 1) as usize,
            chosen: Vec::new(),
            best: None,
        };
        search.run(-(mu - 1));
        search.best.expect("non-empty range")
    };
    Ok(ZResult {
        value,
        witness: ShiftSet(witness),
    })
}

/// `Z(H, mu, mu)`, where the shift set is forced to `{-1, ..., -(mu-1)}`.
/// Runs in `O(mu + c)`.
pub fn z_full(table: &SemigroupTable, mu: i64) -> i64 {
    if mu <= 1 {
        return 0;
    }
    let c = table.conductor();
    // next_member[y] = least element of H that is >= y, for y in [0, c].
    let mut next_member = vec![c; (c + 1) as usize];
    for y in (0..c).rev() {
        next_member[y as usize] = if table.contains(y) {
            y
        } else {
            next_member[y as usize + 1]
        };
    }
    let next = |y: i64| if y <= 0 { 0 } else if y >= c { y } else { next_member[y as usize] };
    (-(mu - 1)..c)
        .filter(|&a| !table.contains(a) && next(a + 1) < a + mu)
        .count() as i64
}

/// A nested pair `C_L(D, mu2 Q) ⊂ C_L(D, mu1 Q)` of one-point codes of
/// length `n`, with dimensions taken from the semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CodePairSpec {
    pub n: i64,
    pub mu1: i64,
    pub mu2: i64,
    pub k1: i64,
    pub k2: i64,
    /// Codimension `k1 - k2`.
    pub ell_cd: i64,
    pub mu_diff: i64,
}

impl CodePairSpec {
    pub fn new(n: i64, mu1: i64, mu2: i64, table: &SemigroupTable) -> Result<Self> {
        if !(-1 <= mu2 && mu2 < mu1 && mu1 < n) {
            return Err(Error::InvalidParams(format!(
                "need -1 <= mu2 < mu1 <= n - 1, got mu2 = {mu2}, mu1 = {mu1}, n = {n}"
            )));
        }
        let k1 = table.dimension(mu1, n)?;
        let k2 = table.dimension(mu2, n)?;
        Ok(CodePairSpec {
            n,
            mu1,
            mu2,
            k1,
            k2,
            ell_cd: k1 - k2,
            mu_diff: mu1 - mu2,
        })
    }
}

/// `n - mu1 + Z(H, mu1 - mu2, m)` for `1 <= m <= ell_cd`.
pub fn rghw_lower_exact(
    pair: &CodePairSpec,
    table: &SemigroupTable,
    m: i64,
    opts: ZOptions,
) -> Result<BoundValue> {
    if m < 1 || m > pair.ell_cd {
        return Err(Error::Precondition(format!(
            "need 1 <= m <= ell = {}, got m = {m}",
            pair.ell_cd
        )));
    }
    let z = z_exact(table, pair.mu_diff, m, opts)?;
    Ok(
        BoundValue::new(pair.n - pair.mu1 + z.value, BoundKind::Lower, "teomu-exactZ")
            .assume(format!("1 <= m = {m} <= ell = {}", pair.ell_cd))
            .assume(format!("-1 <= mu2 = {} < mu1 = {} < n = {}", pair.mu2, pair.mu1, pair.n))
            .with_witness(z.witness.into_vec()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::build_recursive;
    use crate::tower::TowerParams;

    fn h(ell: u64, nu: u32) -> SemigroupTable {
        build_recursive(TowerParams::new(ell, nu).unwrap()).unwrap()
    }

    fn shifts(v: &[i64]) -> ShiftSet {
        ShiftSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn shift_set_validation() {
        assert!(ShiftSet::new(vec![-3, -3]).is_err());
        assert!(ShiftSet::new(vec![-3, 0]).is_err());
        assert!(ShiftSet::for_mu(vec![-5], 5).is_err());
        assert!(ShiftSet::for_mu(vec![-4, -1], 5).is_ok());
    }

    #[test]
    fn gap_counts() {
        assert_eq!(shifted_gap_count(&h(2, 4), &shifts(&[-1])), 4);
        assert_eq!(shifted_gap_count(&h(3, 6), &ShiftSet::default()), 0);
        assert_eq!(shifted_gap_count(&h(3, 6), &shifts(&[-20])), 40);
    }

    #[test]
    fn z_small_cases() {
        let o = ZOptions::default();
        let t = h(2, 4);
        assert_eq!(z_exact(&t, 7, 1, o).unwrap().value, 0);
        let r = z_exact(&t, 4, 4, o).unwrap();
        assert_eq!(r.value, 8);
        assert_eq!(r.witness.as_slice(), &[-3, -2, -1]);
        assert_eq!(z_full(&t, 8), 16);
        assert_eq!(z_full(&t, 4), 8);
        assert_eq!(z_full(&t, 1), 0);
    }

    #[test]
    fn z_example_level_six() {
        let r = z_exact(&h(3, 6), 21, 2, ZOptions::default()).unwrap();
        assert_eq!(r.value, 11);
        assert_eq!(r.witness.as_slice(), &[-3]);
    }

    #[test]
    fn z_precondition_and_guard() {
        let t = h(2, 4);
        assert!(z_exact(&t, 4, 5, ZOptions::default()).is_err());
        assert!(z_exact(&t, 4, 0, ZOptions::default()).is_err());
        let tight = ZOptions {
            budget: 10,
            ..ZOptions::default()
        };
        match z_exact(&t, 12, 6, tight) {
            Err(Error::Workload { estimate, budget }) => {
                assert_eq!(estimate, 462 * 12);
                assert_eq!(budget, 10);
            }
            other => panic!("expected workload error, got {other:?}"),
        }
        let forced = ZOptions { force: true, ..tight };
        assert!(z_exact(&t, 12, 6, forced).is_ok());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(11, 5), 462);
        assert_eq!(binomial(5, 7), 0);
        assert_eq!(binomial(10_000, 5_000), u128::MAX);
    }

    #[test]
    fn exact_rghw_examples() {
        let t = h(2, 4);
        let o = ZOptions::default();
        let pair = CodePairSpec::new(50, 20, 16, &t).unwrap();
        assert_eq!((pair.k1, pair.k2, pair.ell_cd), (12, 8, 4));
        assert_eq!(rghw_lower_exact(&pair, &t, 4, o).unwrap().as_i64(), Some(38));
        assert_eq!(rghw_lower_exact(&pair, &t, 1, o).unwrap().as_i64(), Some(30));
        let pair = CodePairSpec::new(50, 20, 12, &t).unwrap();
        assert_eq!(rghw_lower_exact(&pair, &t, 8, o).unwrap().as_i64(), Some(46));
        assert!(rghw_lower_exact(&pair, &t, 9, o).is_err());
    }

    #[test]
    fn pair_validation() {
        let t = h(2, 4);
        assert!(CodePairSpec::new(50, 16, 16, &t).is_err());
        assert!(CodePairSpec::new(50, 50, 16, &t).is_err());
        assert!(CodePairSpec::new(50, 3, -2, &t).is_err());
        let p = CodePairSpec::new(50, 3, -1, &t).unwrap();
        assert_eq!((p.k1, p.k2), (1, 0));
    }

    #[test]
    fn parallel_matches_sequential() {
        let t = h(3, 6);
        for (mu, m) in [(21, 2), (12, 4), (9, 3), (8, 8)] {
            let seq = z_exact(&t, mu, m, ZOptions::default()).unwrap();
            let par = z_exact(
                &t,
                mu,
                m,
                ZOptions {
                    parallel: true,
                    ..ZOptions::default()
                },
            )
            .unwrap();
            assert_eq!(seq, par, "mu={mu} m={m}");
        }
    }
}
