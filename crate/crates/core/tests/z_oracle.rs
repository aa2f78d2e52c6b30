mod common;

use common::Oracle;
use gs_rghw::rghw::{shifted_gap_count, z_exact, z_full, ShiftSet};
use gs_rghw::{build_recursive, Error, SemigroupTable, TowerParams, ZOptions};

fn table(ell: u64, nu: u32) -> SemigroupTable {
    build_recursive(TowerParams::new(ell, nu).unwrap()).unwrap()
}

fn check_grid(ell: u64, nu: u32, max_mu: i64, max_m: i64) {
    let t = table(ell, nu);
    let o = Oracle::new(ell as i64, nu);
    for mu in 1..=max_mu {
        for m in 1..=mu.min(max_m) {
            let lib = z_exact(&t, mu, m, ZOptions::default()).unwrap();
            let (v, w) = o.z(mu, m);
            assert_eq!(lib.value, v, "Z(H({ell},{nu}), {mu}, {m})");
            assert_eq!(lib.witness.as_slice(), w.as_slice(), "witness of Z({mu}, {m})");
            assert_eq!(shifted_gap_count(&t, &lib.witness), v);
        }
        assert_eq!(z_full(&t, mu), o.z_full(mu), "z_full({mu})");
    }
}

#[test]
fn exact_z_small_levels() {
    check_grid(2, 2, 9, 9);
    check_grid(2, 3, 10, 10);
    check_grid(2, 4, 12, 12);
    check_grid(3, 2, 10, 10);
    check_grid(3, 4, 9, 5);
}

#[test]
fn exact_z_level_six() {
    check_grid(3, 6, 8, 3);
}

#[test]
fn pinned_examples() {
    let t = table(3, 6);
    let o = Oracle::new(3, 6);
    let single = ShiftSet::new(vec![-20]).unwrap();
    let v = shifted_gap_count(&t, &single);
    assert_eq!(v, o.shifted_gaps(&[-20]));
    assert_eq!(v, 40);
    assert!(9 + 13 <= v);

    let z = z_exact(&t, 21, 2, ZOptions::default()).unwrap();
    assert_eq!((z.value, z.witness.as_slice()), (11, &[-3][..]));
    assert_eq!(o.z(21, 2), (11, vec![-3]));

    let t24 = table(2, 4);
    let z = z_exact(&t24, 4, 4, ZOptions::default()).unwrap();
    assert_eq!(z.value, 8);
    assert_eq!(z.witness.as_slice(), &[-3, -2, -1]);
    let expected: Vec<i64> = (1..=12).map(|mu| Oracle::new(2, 4).z_full(mu)).collect();
    assert_eq!(expected, vec![0, 4, 6, 8, 10, 12, 14, 16, 17, 18, 19, 20]);
}

#[test]
fn parallel_matches_sequential() {
    let t = table(3, 4);
    for (mu, m) in [(9, 3), (12, 4), (15, 3)] {
        let seq = z_exact(&t, mu, m, ZOptions::default()).unwrap();
        let par = z_exact(
            &t,
            mu,
            m,
            ZOptions {
                parallel: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
    }
}

#[test]
fn workload_guard() {
    let t = table(2, 4);
    let opts = ZOptions {
        budget: 100,
        ..Default::default()
    };
    assert!(matches!(z_exact(&t, 12, 6, opts), Err(Error::Workload { .. })));
    let forced = ZOptions { force: true, ..opts };
    assert_eq!(z_exact(&t, 12, 6, forced).unwrap().value, Oracle::new(2, 4).z(12, 6).0);
}
