mod common;

use common::{f_min_sampled, pow, u1, Oracle};
use gs_rghw::closed::{
    ghw_abundant, ghw_basic, highest_rghw, propemme_g, propmu_closed, propmu_closed_value,
    propmu_recursion_check, propmu_u1, singleton_upper, z_full_sequence, ClosedFormSign,
};
use gs_rghw::rghw::{rghw_lower_exact, z_exact};
use gs_rghw::{build_recursive, BoundKind, CodePairSpec, SemigroupTable, TowerParams, ZOptions};

fn table(ell: u64, nu: u32) -> SemigroupTable {
    build_recursive(TowerParams::new(ell, nu).unwrap()).unwrap()
}

const LEVELS: [(u64, u32); 6] = [(2, 2), (2, 4), (2, 6), (3, 2), (3, 4), (3, 6)];

#[test]
fn first_branch() {
    for (ell, nu) in LEVELS {
        let o = Oracle::new(ell as i64, nu);
        let top = pow(ell as i64, nu - 1);
        for mu in top..=top + 10 {
            assert_eq!(o.z_full(mu), o.gaps() + mu - 1, "ell={ell} nu={nu} mu={mu}");
            let b = propmu_closed(&table(ell, nu), mu, ClosedFormSign::Minus).unwrap();
            assert_eq!(b.kind, BoundKind::Exact);
            assert_eq!(b.as_i64(), Some(o.gaps() + mu - 1));
        }
    }
}

#[test]
fn recursion_and_conjecture() {
    for (ell, nu) in LEVELS {
        let t = table(ell, nu);
        let o = Oracle::new(ell as i64, nu);
        let top = pow(ell as i64, nu - 1);
        let z: Vec<i64> = (1..=top).map(|mu| o.z_full(mu)).collect();
        assert_eq!(z_full_sequence(&t, top), z);
        for mu in 2..=top {
            let u = u1(ell as i64, nu, mu);
            assert_eq!(propmu_u1(t.params(), mu).unwrap(), u);
            assert_eq!(z[(mu - 2) as usize], z[(mu - 1) as usize] - pow(ell as i64, u as u32));
        }
        assert!(propmu_recursion_check(&t, top).unwrap().all_hold());
        for mu in 1..top {
            let paper = propmu_closed_value(t.params(), o.gaps(), mu, ClosedFormSign::Minus).unwrap();
            assert_eq!(z[(mu - 1) as usize] - paper, top - mu, "ell={ell} nu={nu} mu={mu}");
        }
    }
}

#[test]
fn plus_sign_variant_misses_the_conjecture() {
    let t = table(3, 6);
    let o = Oracle::new(3, 6);
    let off = (1..243)
        .filter(|&mu| {
            let p = propmu_closed_value(t.params(), o.gaps(), mu, ClosedFormSign::Plus).unwrap();
            o.z_full(mu) - p != 243 - mu
        })
        .count();
    assert!(off > 0);
}

#[test]
fn small_codimension_soundness() {
    let grids: [(u64, u32, i64, i64); 4] = [(2, 2, 7, 7), (2, 4, 12, 6), (3, 4, 9, 3), (3, 6, 8, 3)];
    for (ell, nu, max_mu, max_m) in grids {
        let o = Oracle::new(ell as i64, nu);
        let p = TowerParams::new(ell, nu).unwrap();
        for mu in 2..=max_mu {
            for m in 2..=mu.min(max_m) {
                let g = propemme_g(p, mu, m).unwrap();
                let z = o.z(mu, m).0;
                assert!(g.g_auth - 1e-9 <= z as f64, "g_auth({mu},{m}) = {} > {z}", g.g_auth);
                // g_auth is the minimum of f over the proof's interval.
                let pr = g.params.unwrap();
                let sampled = f_min_sampled((ell * ell) as f64, nu, m, pr.lo, pr.hi_proof);
                assert!(g.g_auth <= sampled + 1e-9);
                assert!(g.g_auth >= sampled - 1e-3);
            }
        }
    }
}

#[test]
fn small_codimension_golden() {
    let g = propemme_g(TowerParams::new(3, 6).unwrap(), 21, 2).unwrap();
    assert!((g.g_auth - 9.302428182979988).abs() < 1e-9);
    assert!(g.g_auth <= 11.0);
    let g = propemme_g(TowerParams::new(2, 4).unwrap(), 8, 3).unwrap();
    assert!((g.g_auth - 3.7622).abs() < 1e-4);
    assert_eq!(Oracle::new(2, 4).z(8, 3), (6, vec![-4, -2]));
    assert_eq!(propemme_g(TowerParams::new(2, 4).unwrap(), 8, 1).unwrap().g_auth, 0.0);
}

#[test]
fn goppa_bounds_are_sound_and_ordered() {
    let t = table(2, 4);
    let o = Oracle::new(2, 4);
    let n = 30;
    for mu1 in 1..=16 {
        for mu2 in -1..mu1 {
            let pair = CodePairSpec::new(n, mu1, mu2, &t).unwrap();
            for m in 1..=pair.ell_cd.min(t.gaps()) {
                let exact = n - mu1 + o.z(pair.mu_diff, m).0;
                let lib = rghw_lower_exact(&pair, &t, m, ZOptions::default()).unwrap();
                assert_eq!(lib.as_i64(), Some(exact));
                let ag = ghw_abundant(n, mu1, Some(mu2), &t, m).unwrap();
                assert!(ag.as_i64().unwrap() <= exact, "propAG {mu1} {mu2} {m}");
                let up = singleton_upper(n, pair.k1, m).unwrap();
                assert!(exact <= up.as_i64().unwrap());
            }
        }
        // Plain GHWs: the abundant bound dominates the basic one below 2g - 1.
        let k1 = t.dimension(mu1, n).unwrap();
        if mu1 <= 2 * t.gaps() - 2 {
            for m in 1..=k1.min(t.gaps()) {
                let a = ghw_abundant(n, mu1, None, &t, m).unwrap().as_i64().unwrap();
                let b = ghw_basic(n, k1, &t, m).unwrap();
                assert!(a >= b.bound.as_i64().unwrap());
                assert!(b.bound.as_i64() >= b.weakened.as_i64());
            }
        }
    }
}

#[test]
fn highest_weight_singleton_case() {
    let t = table(2, 4);
    let pair = CodePairSpec::new(40, 25, 17, &t).unwrap();
    assert_eq!((pair.k1, pair.k2, pair.ell_cd), (17, 9, 8));
    let h = highest_rghw(&pair, &t, ZOptions::default()).unwrap();
    assert!(h.exact);
    assert_eq!(h.lower.as_i64(), Some(31));
    assert_eq!(40 - 25 + Oracle::new(2, 4).z_full(8), 31);

    // Codimension below mu: the top weight uses Z(mu, ell), not Z(mu, mu).
    let pair = CodePairSpec::new(40, 12, 7, &t).unwrap();
    assert!(pair.ell_cd < pair.mu_diff);
    let h = highest_rghw(&pair, &t, ZOptions::default()).unwrap();
    let exact = z_exact(&t, pair.mu_diff, pair.ell_cd, ZOptions::default()).unwrap().value;
    assert_eq!(h.lower.as_i64(), Some(40 - 12 + exact));
    assert!(h.lower.as_i64() <= h.upper.as_i64());
}
