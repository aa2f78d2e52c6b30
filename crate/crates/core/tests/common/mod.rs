//! Brute-force reference implementations used as ground truth by the tests.
//! Everything here works from the definitions with plain sets and no
//! incremental bookkeeping, and shares no code with the library.
#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;

pub fn pow(b: i64, e: u32) -> i64 {
    b.pow(e)
}

/// `ell^nu - ell^{floor((nu+1)/2)}`.
pub fn conductor(ell: i64, nu: u32) -> i64 {
    pow(ell, nu) - pow(ell, nu.div_ceil(2))
}

/// A semigroup as its full membership set on `[0, limit]`.
#[derive(Debug, Clone)]
pub struct Oracle {
    pub ell: i64,
    pub nu: u32,
    pub limit: i64,
    pub set: BTreeSet<i64>,
}

impl Oracle {
    /// `H_1 = N_0`, `H_k = ell H_{k-1} ∪ [c_k, ∞)`, truncated at `limit`.
    pub fn new(ell: i64, nu: u32) -> Self {
        let limit = pow(ell, nu) + 2 * pow(ell, nu.div_ceil(2)) + 8;
        let mut set: BTreeSet<i64> = (0..=limit).collect();
        for k in 2..=nu {
            let c = conductor(ell, k);
            let mut next: BTreeSet<i64> = set.iter().map(|x| x * ell).filter(|&x| x <= limit).collect();
            next.extend(c..=limit);
            set = next;
        }
        Oracle { ell, nu, limit, set }
    }

    pub fn contains(&self, x: i64) -> bool {
        if x < 0 {
            return false;
        }
        // The limit is past the conductor, so everything beyond it is a member.
        x > self.limit || self.set.contains(&x)
    }

    /// Smallest `c` with `[c, limit]` inside the set.
    pub fn conductor(&self) -> i64 {
        let mut c = self.limit;
        while c > 0 && self.contains(c - 1) {
            c -= 1;
        }
        c
    }

    pub fn gaps(&self) -> i64 {
        (0..self.conductor()).filter(|&x| !self.contains(x)).count() as i64
    }

    pub fn elements_below(&self, x: i64) -> Vec<i64> {
        self.set.range(..x).copied().collect()
    }

    /// `#(∪_s (s + H) \ H)` straight from the definition.
    pub fn shifted_gaps(&self, shifts: &[i64]) -> i64 {
        let lo = shifts.iter().copied().min().unwrap_or(0);
        let c = self.conductor();
        (lo..c)
            .filter(|&a| !self.contains(a) && shifts.iter().any(|&s| self.contains(a - s)))
            .count() as i64
    }

    /// `Z(H, mu, m)` by enumerating every `(m-1)`-subset of `[-(mu-1), -1]`.
    /// Returns the value and the lexicographically first minimiser.
    pub fn z(&self, mu: i64, m: i64) -> (i64, Vec<i64>) {
        assert!(1 <= m && m <= mu);
        let mut best: Option<(i64, Vec<i64>)> = None;
        for combo in (-(mu - 1)..=-1).combinations((m - 1) as usize) {
            let v = self.shifted_gaps(&combo);
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, combo));
            }
        }
        best.unwrap_or((0, Vec::new()))
    }

    /// `Z(H, mu, mu)`: every shift forced.
    pub fn z_full(&self, mu: i64) -> i64 {
        let shifts: Vec<i64> = (-(mu - 1)..=-1).collect();
        self.shifted_gaps(&shifts)
    }
}

/// Largest `u` with `ell^{2u} mu <= ell^{nu+1}`.
pub fn u1(ell: i64, nu: u32, mu: i64) -> i64 {
    let target = pow(ell, nu + 1);
    let mut u = 0;
    while pow(ell, 2 * (u as u32 + 1)) * mu <= target {
        u += 1;
    }
    u
}

/// Explicit decomposition for even `nu`, as a set on `[0, c]` plus the tail.
pub fn explicit_members(ell: i64, nu: u32) -> BTreeSet<i64> {
    assert!(nu.is_multiple_of(2));
    let mut out = BTreeSet::from([0]);
    for i in 1..=nu / 2 {
        for k in 1..=pow(ell, i) - pow(ell, i - 1) {
            out.insert(pow(ell, nu) - pow(ell, nu - i + 1) + k * pow(ell, nu + 1 - 2 * i));
        }
    }
    out
}

/// `f(u)` of the small-codimension bound.
pub fn f(q: f64, nu: u32, m: i64, u: f64) -> f64 {
    (m - 1) as f64 * q.powf(nu as f64 / 4.0 - u / 2.0) + q.powf(u - 0.5) * (1.0 - 1.0 / q.sqrt()) - 1.0
}

/// Minimum of `f` over `[lo, hi]` by dense sampling plus the endpoints,
/// slightly below the true minimum only by sampling error.
pub fn f_min_sampled(q: f64, nu: u32, m: i64, lo: f64, hi: f64) -> f64 {
    let steps = 20_000;
    (0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .map(|u| f(q, nu, m, u))
        .fold(f64::INFINITY, f64::min)
}
