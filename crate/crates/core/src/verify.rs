//! The oracle suite: recomputes every structural claim and closed form on a
//! parameter grid and collects disagreements as ledger records.

use serde::Serialize;

use crate::asymptotics::{cormu_continuity, BetaSource};
use crate::closed::{propemme_g, propmu_closed_value, propmu_recursion_check, z_full_sequence, ClosedFormSign};
use crate::error::{Error, Result};
use crate::explicit::build_explicit;
use crate::ledger::{sort_records, KnownErrata, LedgerParams, LedgerRecord};
use crate::rghw::{z_exact, z_exact_estimate, z_full, ZOptions};
use crate::semigroup::{build_recursive, SemigroupDoc, SemigroupTable};
use crate::tower::{conductor, genus_formula_printed, genus_gap_law, TowerParams};

/// Absolute tolerance when comparing a real-valued bound with an integer.
pub const SOUNDNESS_TOLERANCE: f64 = 1e-9;
/// Tolerance for the branch continuity check of the small-codimension curve.
pub const CONTINUITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub max_ell: u64,
    pub max_nu: u32,
    pub max_mu: i64,
    pub budget: u128,
    /// Replace `H(2, 4)` by a corrupted table before running the suites.
    pub inject_fault: bool,
    pub parallel: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_ell: 3,
            max_nu: 6,
            max_mu: 12,
            budget: crate::rghw::DEFAULT_BUDGET,
            inject_fault: false,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub cases: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    /// Every record, sorted.
    pub records: Vec<LedgerRecord>,
    /// Records not covered by the known-errata allowlist.
    pub unexpected: Vec<LedgerRecord>,
    pub suites: Vec<SuiteSummary>,
    pub errata_version: u32,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.unexpected.is_empty()
    }
}

/// Largest `m` tried in the soundness suite for a given conductor.
fn soundness_m_cap(c: i64) -> i64 {
    if c <= 64 {
        6
    } else {
        3
    }
}

fn levels(cfg: &VerifyConfig) -> Result<Vec<TowerParams>> {
    if cfg.max_ell < 2 || cfg.max_nu < 1 || cfg.max_mu < 1 {
        return Err(Error::InvalidParams(format!(
            "need max_ell >= 2, max_nu >= 1, max_mu >= 1; got {}, {}, {}",
            cfg.max_ell, cfg.max_nu, cfg.max_mu
        )));
    }
    let mut out = Vec::new();
    for ell in 2..=cfg.max_ell {
        for nu in 1..=cfg.max_nu {
            out.push(TowerParams::new(ell, nu)?);
        }
    }
    Ok(out)
}

fn soundness_cases(params: TowerParams, c: i64, max_mu: i64) -> Result<Vec<(i64, i64)>> {
    if !params.is_even_level() {
        return Ok(Vec::new());
    }
    let cap = params.ell_pow(params.nu() + 1)?;
    let mut out = Vec::new();
    for mu in 2..=max_mu {
        if mu as i128 >= cap {
            break;
        }
        for m in 2..=mu.min(soundness_m_cap(c)) {
            out.push((mu, m));
        }
    }
    Ok(out)
}

/// Estimated number of elementary steps of a run.
pub fn estimate_workload(cfg: &VerifyConfig) -> Result<u128> {
    let mut total: u128 = 0;
    for p in levels(cfg)? {
        let c = conductor(p)? as i64;
        let top = if p.nu() >= 1 { p.ell_pow(p.nu() - 1)? as u128 } else { 0 };
        // Table construction, explicit comparison and the z_full sequences.
        total = total.saturating_add(4 * (c as u128 + top + 16));
        for (mu, m) in soundness_cases(p, c, cfg.max_mu)? {
            total = total
                .saturating_add(z_exact_estimate(mu, m))
                .saturating_add((c + mu) as u128);
        }
    }
    Ok(total)
}

/// A copy of `H(2, 4)` with 9 added, which is closed under addition but is
/// not the tower semigroup.
pub fn corrupted_h24() -> SemigroupTable {
    let doc = SemigroupDoc {
        ell: 2,
        nu: 4,
        conductor: 12,
        small_elements: vec![0, 8, 9, 10],
        gaps: 8,
    };
    SemigroupTable::from_doc(&doc).expect("structurally valid")
}

struct Collector {
    records: Vec<LedgerRecord>,
    suites: Vec<SuiteSummary>,
}

impl Collector {
    fn suite(&mut self, name: &str, cases: usize, violations: usize) {
        if let Some(s) = self.suites.iter_mut().find(|s| s.suite == name) {
            s.cases += cases;
            s.violations += violations;
        } else {
            self.suites.push(SuiteSummary {
                suite: name.into(),
                cases,
                violations,
            });
        }
    }

    fn violation(&mut self, suite: &str, params: LedgerParams, paper: i64, oracle: i64) {
        self.records
            .push(LedgerRecord::integer(&format!("violation:{suite}"), params, paper, oracle));
    }
}

fn check_level(cfg: &VerifyConfig, params: TowerParams, table: &SemigroupTable, out: &mut Collector) -> Result<()> {
    let (ell, nu) = (params.ell(), params.nu());
    let lp = || LedgerParams::level(ell, nu);
    let c = table.conductor();
    let g = table.gaps();

    // Gap-count law and the printed genus formula.
    let law = genus_gap_law(params)? as i64;
    let bad = (g != law) as usize;
    if bad > 0 {
        out.violation("gap-count-law", lp(), law, g);
    }
    out.suite("gap-count-law", 1, bad);
    let printed = genus_formula_printed(params)? as i64;
    if printed != g {
        out.records.push(LedgerRecord::integer("genus-formula", lp(), printed, g));
    }

    // Conductor: matches the closed form and is at most 2g.
    let expected_c = conductor(params)? as i64;
    let mut bad = 0;
    if c != expected_c {
        out.violation("conductor", lp().with_detail("closed form"), expected_c, c);
        bad += 1;
    }
    if c > 2 * g {
        out.violation("conductor", lp().with_detail("c <= 2g"), 2 * g, c);
        bad += 1;
    }
    out.suite("conductor", 1, bad);

    let closure = table.additive_closure_violation();
    if let Some((x, y)) = closure {
        out.violation("additive-closure", lp().with_detail(format!("{x} + {y}")), 1, 0);
    }
    out.suite("additive-closure", 1, closure.is_some() as usize);

    if ell == 3 && nu == 6 {
        // First element after 648 in the printed block.
        let first = (649..).find(|&x| table.contains(x)).expect("cofinite");
        if first != 654 {
            out.records
                .push(LedgerRecord::integer("example-651", lp(), 654, first));
        }
    }

    if !params.is_even_level() {
        return Ok(());
    }

    // Construction equivalence on [0, c] and the decomposition properties.
    let explicit = build_explicit(params)?;
    let ex = explicit.membership_vector(c);
    let rec = table.membership_vector(c);
    let mismatch = (0..=c as usize).find(|&i| ex[i] != rec[i]);
    let mut bad = (explicit.conductor() != c) as usize;
    if let Some(x) = mismatch {
        out.violation(
            "construction-equivalence",
            lp().with_detail(format!("x = {x}")),
            ex[x] as i64,
            rec[x] as i64,
        );
        bad += 1;
    } else if bad > 0 {
        out.violation("construction-equivalence", lp().with_detail("conductor"), explicit.conductor(), c);
    }
    out.suite("construction-equivalence", 1, bad);
    let lemma = explicit.lemma_violations();
    for v in &lemma {
        out.violation(
            "decomposition-lemma",
            lp().with_detail(format!("property {} of S^{}: {}", v.property, v.set_index, v.detail)),
            0,
            1,
        );
    }
    out.suite("decomposition-lemma", 1, lemma.len());

    if nu < 2 {
        return Ok(());
    }
    let top = params.ell_pow(nu - 1)? as i64;
    let zs = z_full_sequence(table, top + 10);

    // First branch: z_full(mu) = g + mu - 1 from q^{(nu-1)/2} on.
    let mut bad = 0;
    for mu in top..=top + 10 {
        let z = zs[(mu - 1) as usize];
        if z != g + mu - 1 {
            out.violation("propmu-first-branch", lp().with_mu(mu), g + mu - 1, z);
            bad += 1;
        }
    }
    out.suite("propmu-first-branch", 11, bad);

    let rec = propmu_recursion_check(table, top)?;
    let mut bad = 0;
    for s in rec.violations() {
        out.violation("propmu-recursion", lp().with_mu(s.mu), s.z_cur - s.expected_step, s.z_prev);
        bad += 1;
    }
    out.suite("propmu-recursion", rec.steps.len(), bad);

    // Closed form below the threshold, against the exact value.
    let mut cases = 0;
    for mu in 1..top.min(cfg.max_mu + 1) {
        let paper = propmu_closed_value(params, g, mu, ClosedFormSign::Minus)?;
        let oracle = zs[(mu - 1) as usize];
        if paper != oracle {
            out.records
                .push(LedgerRecord::integer("propmu-closed-form", lp().with_mu(mu), paper, oracle));
        }
        cases += 1;
    }
    out.suite("propmu-closed-form", cases, 0);

    // Z(mu, mu) by enumeration agrees with the forced evaluation.
    let opts = ZOptions {
        budget: cfg.budget,
        force: false,
        parallel: cfg.parallel,
    };
    let mut bad = 0;
    let mut cases = 0;
    for mu in 2..=cfg.max_mu.min(6) {
        let e = z_exact(table, mu, mu, opts)?.value;
        let f = z_full(table, mu);
        if e != f {
            out.violation("zfull-agreement", lp().with_mu(mu), f, e);
            bad += 1;
        }
        cases += 1;
    }
    out.suite("zfull-agreement", cases, bad);

    // Soundness of the small-codimension bound.
    let cases = soundness_cases(params, c, cfg.max_mu)?;
    let mut bad = 0;
    for &(mu, m) in &cases {
        let z = z_exact(table, mu, m, opts)?.value;
        let gm = propemme_g(params, mu, m)?;
        if gm.g_auth - SOUNDNESS_TOLERANCE > z as f64 {
            out.records.push(LedgerRecord::real(
                "violation:propemme-soundness",
                lp().with_mu(mu).with_m(m),
                gm.g_auth,
                z as f64,
            ));
            bad += 1;
        }
        if gm.g_stmt - SOUNDNESS_TOLERANCE > z as f64 {
            out.records.push(LedgerRecord::real(
                "propemme-statement",
                lp().with_mu(mu).with_m(m),
                gm.g_stmt,
                z as f64,
            ));
        }
    }
    out.suite("propemme-soundness", cases.len(), bad);
    Ok(())
}

fn check_continuity(cfg: &VerifyConfig, out: &mut Collector) -> Result<()> {
    let mut cases = 0;
    for ell in 2..=cfg.max_ell {
        let q = ell * ell;
        let cap = 1.0 / (ell as f64 - 1.0);
        for frac in [0.001, 0.01, 0.1, 0.5] {
            let r_tilde = cap * frac;
            let k = cormu_continuity(q, r_tilde, BetaSource::RTilde)?;
            cases += 1;
            if k.gap.abs() > CONTINUITY_TOLERANCE {
                out.records.push(LedgerRecord::real(
                    "cormu-beta-continuity",
                    LedgerParams {
                        q: Some(q),
                        rtilde: Some(r_tilde),
                        ..Default::default()
                    },
                    k.small_at_beta,
                    k.large_at_beta,
                ));
            }
        }
    }
    out.suite("cormu-continuity", cases, 0);
    Ok(())
}

/// Runs every suite. Fails with [`Error::Workload`] before doing any work if
/// the estimate exceeds the budget.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let estimate = estimate_workload(cfg)?;
    if estimate > cfg.budget {
        return Err(Error::Workload {
            estimate,
            budget: cfg.budget,
        });
    }
    let mut out = Collector {
        records: Vec::new(),
        suites: Vec::new(),
    };
    for params in levels(cfg)? {
        let table = if cfg.inject_fault && params.ell() == 2 && params.nu() == 4 {
            corrupted_h24()
        } else {
            build_recursive(params)?
        };
        check_level(cfg, params, &table, &mut out)?;
    }
    check_continuity(cfg, &mut out)?;

    sort_records(&mut out.records);
    out.suites.sort_by(|a, b| a.suite.cmp(&b.suite));
    let errata = KnownErrata::shipped();
    let unexpected = out
        .records
        .iter()
        .filter(|r| !errata.is_known(r))
        .cloned()
        .collect();
    Ok(VerifyReport {
        records: out.records,
        unexpected,
        suites: out.suites,
        errata_version: errata.version,
    })
}
