//! Asymptotic bounds for code sequences from the tower: the Goppa-like
//! relative distance bounds, the small-codimension curve `g(rho)`, and the
//! highest-RGHW rate `M`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bound::{BoundKind, BoundValue, Discrepancy};
use crate::closed::propemme_g;
use crate::error::{Error, Result};
use crate::tower::TowerParams;

/// Snapping tolerance for floors of logarithms that are integral in exact
/// arithmetic.
const LOG_SNAP: f64 = 1e-9;

/// `sqrt(q)` for a perfect square `q >= 4`.
pub fn sqrt_q(q: u64) -> Result<f64> {
    let s = (q as f64).sqrt().round() as u64;
    if q < 4 || s * s != q {
        return Err(Error::Domain(format!("q = {q} must be a perfect square >= 4")));
    }
    Ok(s as f64)
}

fn log_q(q: f64, x: f64) -> f64 {
    x.ln() / q.ln()
}

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < LOG_SNAP {
        r
    } else {
        x
    }
}

fn in_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("{name} = {x} must lie in [0, 1]")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoroAgDelta {
    /// `1 - R + 2 rho - 1/(sqrt(q) - 1)`.
    pub delta1: f64,
    /// `1 - R~ + 2 rho`.
    pub delta2: f64,
}

/// Relative GHW bounds for sequences of one-point codes with rate `R`,
/// `mu/n -> r_tilde` and `m/n -> rho`.
pub fn coro_ag_delta(q: u64, r: f64, r_tilde: f64, rho: f64) -> Result<CoroAgDelta> {
    let s = sqrt_q(q)?;
    let inv = 1.0 / (s - 1.0);
    if !(0.0..=1.0 - inv).contains(&r) {
        return Err(Error::Domain(format!(
            "need 0 <= R <= 1 - 1/(sqrt(q)-1) = {}, got R = {r}",
            1.0 - inv
        )));
    }
    if !(0.0..1.0).contains(&r_tilde) {
        return Err(Error::Domain(format!("need 0 <= R~ < 1, got R~ = {r_tilde}")));
    }
    let cap = r.min(inv);
    if !(0.0..=cap).contains(&rho) {
        return Err(Error::Domain(format!(
            "need 0 <= rho <= min(R, 1/(sqrt(q)-1)) = {cap}, got rho = {rho}"
        )));
    }
    Ok(CoroAgDelta {
        delta1: 1.0 - r + 2.0 * rho - inv,
        delta2: 1.0 - r_tilde + 2.0 * rho,
    })
}

/// Which rate enters the threshold `beta` of the small-codimension curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
#[serde(rename_all = "kebab-case", tag = "source", content = "value")]
pub enum BetaSource {
    /// Use the codimension rate `R~` from the hypothesis.
    #[default]
    RTilde,
    /// Use an explicitly supplied `R`, as printed in the threshold.
    R(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CormuBranch {
    Zero,
    Small,
    Large,
}

impl CormuBranch {
    pub fn label(self) -> &'static str {
        match self {
            CormuBranch::Zero => "zero",
            CormuBranch::Small => "small",
            CormuBranch::Large => "large",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CormuG {
    pub value: f64,
    pub branch: CormuBranch,
    pub beta: f64,
    pub beta_source: BetaSource,
}

fn cormu_beta(q: f64, s: f64, rate: f64) -> f64 {
    let first = 0.25 * q.powf(-2.5) * (s - 1.0).powi(-3);
    let second = 2.0 * q.powf(-0.25) * (rate * s - rate).powf(1.5);
    first.min(second)
}

fn cormu_small(q: f64, s: f64, rho: f64) -> f64 {
    (2.0 * rho * rho / q).cbrt() + (rho / 2.0).powf(2.0 / 3.0) / s
}

fn cormu_large(q: f64, s: f64, rho: f64, r_tilde: f64) -> f64 {
    [rho, r_tilde]
        .into_iter()
        .map(|w| rho * (w * (q - s)).powf(-0.5) + w / q * (q - s))
        .fold(f64::INFINITY, f64::min)
}

/// The curve `g(rho)` of the small-codimension asymptotic bound
/// `M >= 1 - R~1 + g(rho)`.
pub fn cormu_g(q: u64, rho: f64, r_tilde: f64, beta_source: BetaSource) -> Result<CormuG> {
    let s = sqrt_q(q)?;
    let qf = q as f64;
    if !(0.0..1.0 / (s - 1.0)).contains(&r_tilde) {
        return Err(Error::Domain(format!(
            "need 0 <= R~ < 1/(sqrt(q)-1) = {}, got R~ = {r_tilde}",
            1.0 / (s - 1.0)
        )));
    }
    in_unit("rho", rho)?;
    let rate = match beta_source {
        BetaSource::RTilde => r_tilde,
        BetaSource::R(r) => {
            in_unit("R", r)?;
            r
        }
    };
    let beta = cormu_beta(qf, s, rate);
    let (value, branch) = if rho == 0.0 {
        (0.0, CormuBranch::Zero)
    } else if rho <= beta {
        (cormu_small(qf, s, rho), CormuBranch::Small)
    } else {
        (cormu_large(qf, s, rho, r_tilde), CormuBranch::Large)
    };
    Ok(CormuG {
        value,
        branch,
        beta,
        beta_source,
    })
}

/// Values of the two branches of `g` at `rho = beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuityCheck {
    pub beta: f64,
    pub small_at_beta: f64,
    pub large_at_beta: f64,
    pub gap: f64,
}

pub fn cormu_continuity(q: u64, r_tilde: f64, beta_source: BetaSource) -> Result<ContinuityCheck> {
    let g = cormu_g(q, 0.0, r_tilde, beta_source)?;
    let s = sqrt_q(q)?;
    let qf = q as f64;
    let small = cormu_small(qf, s, g.beta);
    let large = cormu_large(qf, s, g.beta, r_tilde);
    Ok(ContinuityCheck {
        beta: g.beta,
        small_at_beta: small,
        large_at_beta: large,
        gap: large - small,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplifiedForm {
    /// As printed, with `1 - R1` as the leading term.
    pub paper: f64,
    /// Specialisation of the general limit form, which leads with `1 - R2`.
    pub derived: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cormu2 {
    pub bound: BoundValue,
    /// `log_q(R (1 - 1/sqrt(q)))`, absent in the Singleton branch.
    pub log_value: Option<f64>,
    /// The general lower bound exactly as printed.
    pub paper_display: Option<f64>,
    /// Limit of the exact `Z(H, mu, mu)` rather than of its closed form.
    pub zfull_limit: Option<f64>,
    pub simplified: Option<SimplifiedForm>,
}

/// Asymptotic highest RGHW rate `M` for rate pairs `R1 > R2`, `R = R1 - R2`.
///
/// For `R >= 1/(q - sqrt(q))` this is `1 - R2`, reported as exact only when
/// `assert_hypotheses` is set. Below that, the returned lower bound is the
/// limit of the finite closed form for `Z(H, mu, mu)`:
/// `1 - R2 - (Σ_{i=1}^{-K-1} (q^{1-i/2} - q^{-i/2}) + q^{1+K/2})/(q - sqrt(q)) + R q^{-K/2}`
/// with `K = ceil(log_q(R (1 - 1/sqrt(q))))`.
pub fn cormu2_m(q: u64, r1: f64, r2: f64, assert_hypotheses: bool) -> Result<Cormu2> {
    let s = sqrt_q(q)?;
    let qf = q as f64;
    let inv = 1.0 / (s - 1.0);
    in_unit("R1", r1)?;
    in_unit("R2", r2)?;
    if r2 < inv {
        return Err(Error::Domain(format!(
            "need R2 >= 1/(sqrt(q)-1) = {inv} (i.e. mu2/n >= 2/(sqrt(q)-1)), got R2 = {r2}"
        )));
    }
    if r1 <= r2 {
        return Err(Error::Domain(format!("need R1 > R2, got R1 = {r1}, R2 = {r2}")));
    }
    let r = r1 - r2;
    let threshold = 1.0 / (qf - s);
    let rate_note = format!("R = R1 - R2 = {r}");

    if r >= threshold - 1e-12 {
        let kind = if assert_hypotheses {
            BoundKind::Exact
        } else {
            BoundKind::Lower
        };
        let mut bound = BoundValue::new(1.0 - r2, kind, "cormu2-singleton")
            .assume(rate_note)
            .assume(format!("R >= 1/(q - sqrt(q)) = {threshold}"));
        if assert_hypotheses {
            bound = bound.assume("user asserts the Singleton-attainment hypotheses");
        }
        return Ok(Cormu2 {
            bound,
            log_value: None,
            paper_display: None,
            zfull_limit: None,
            simplified: None,
        });
    }

    let log_value = snap(log_q(qf, r * (1.0 - 1.0 / s)));
    let sum_to = |upper: i64| -> f64 {
        (1..=upper)
            .map(|i| qf.powf(1.0 - i as f64 / 2.0) - qf.powf(-(i as f64) / 2.0))
            .sum()
    };

    let k = log_value.ceil();
    let ki = k as i64;
    let derived =
        1.0 - r2 - (sum_to(-ki - 1) + qf.powf(1.0 + k / 2.0)) / (qf - s) + r * qf.powf(-k / 2.0);

    let l = log_value.floor();
    let li = l as i64;
    let paper =
        1.0 - r2 - ((sum_to(-li - 1) + qf.powf(1.0 + l / 2.0)) / (qf - s) + r * qf.powf(-l / 2.0));

    let zfull_limit = derived + threshold - r;
    let simplified = (log_value == l).then(|| SimplifiedForm {
        paper: 1.0 - r1 - sum_to(-li - 1) / (qf - s),
        derived: 1.0 - r2 - sum_to(-li - 1) / (qf - s),
    });

    let mut bound = BoundValue::new(derived, BoundKind::Lower, "cormu2-sum")
        .assume(rate_note)
        .assume(format!("R < 1/(q - sqrt(q)) = {threshold}"));
    if (paper - derived).abs() > 1e-9 {
        bound = bound.with_discrepancy(Discrepancy::real(
            paper,
            derived,
            "printed form differs from the limit of the finite closed form",
        ));
    }
    Ok(Cormu2 {
        bound,
        log_value: Some(log_value),
        paper_display: Some(paper),
        zfull_limit: Some(zfull_limit),
        simplified,
    })
}

/// Parameters of a comparison curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveConfig {
    /// Dimension rate `R` used by the first Goppa-like bound.
    pub r: f64,
    /// `mu1 / n`.
    pub r_tilde1: f64,
    /// `mu2 / n`; zero for plain GHWs.
    pub r_tilde2: f64,
    pub beta_source: BetaSource,
}

impl CurveConfig {
    /// GHW comparison (`C2 = 0`) with `R = R~`.
    pub fn ghw(r_tilde: f64) -> Self {
        CurveConfig {
            r: r_tilde,
            r_tilde1: r_tilde,
            r_tilde2: 0.0,
            beta_source: BetaSource::RTilde,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub rho: f64,
    pub delta_coro_ag_eq1: Option<f64>,
    pub delta_coro_ag_eq2: Option<f64>,
    pub delta_cormu: Option<f64>,
    /// Branch of `g(rho)`, followed by the reason for any empty column.
    pub branch: String,
}

/// Evaluates both asymptotic bounds on a grid of `rho`, one row per point,
/// sorted by `rho`. Points outside a formula's domain leave that column
/// empty instead of clamping.
pub fn sample_curves(q: u64, config: CurveConfig, rho_grid: &[f64]) -> Result<Vec<CurveRow>> {
    sqrt_q(q)?;
    if rho_grid.is_empty() {
        return Err(Error::Domain("empty rho grid".into()));
    }
    let mut grid = rho_grid.to_vec();
    grid.sort_by(f64::total_cmp);

    let r_tilde = config.r_tilde1 - config.r_tilde2;
    let cormu_domain = if !(0.0 <= config.r_tilde2 && config.r_tilde2 <= config.r_tilde1 && config.r_tilde1 < 1.0) {
        Err(Error::Domain(format!(
            "need 0 <= R~2 <= R~1 < 1, got R~1 = {}, R~2 = {}",
            config.r_tilde1, config.r_tilde2
        )))
    } else {
        Ok(())
    };

    let mut rows = Vec::with_capacity(grid.len());
    for rho in grid {
        let mut reasons = Vec::new();
        let (eq1, eq2) = match coro_ag_delta(q, config.r, config.r_tilde1, rho) {
            Ok(d) => (Some(d.delta1), Some(d.delta2)),
            Err(e) => {
                reasons.push(format!("coro_ag: {e}"));
                (None, None)
            }
        };
        let cormu = cormu_domain
            .clone()
            .and_then(|_| cormu_g(q, rho, r_tilde, config.beta_source));
        let (delta_cormu, label) = match cormu {
            Ok(g) => (Some(1.0 - config.r_tilde1 + g.value), g.branch.label().to_string()),
            Err(e) => {
                reasons.push(format!("cormu: {e}"));
                (None, "none".to_string())
            }
        };
        let branch = if reasons.is_empty() {
            label
        } else {
            format!("{label}; {}", reasons.join("; "))
        };
        rows.push(CurveRow {
            rho,
            delta_coro_ag_eq1: eq1,
            delta_coro_ag_eq2: eq2,
            delta_cormu,
            branch,
        });
    }
    if rows
        .iter()
        .all(|r| r.delta_coro_ag_eq1.is_none() && r.delta_cormu.is_none())
    {
        return Err(Error::Domain(format!(
            "no grid point lies in either domain: {}",
            rows[0].branch
        )));
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "rho,delta_coro_ag_eq1,delta_coro_ag_eq2,delta_cormu,branch";

/// Formats `x` with 12 significant digits, trailing zeros trimmed, switching
/// to exponent notation outside `[1e-5, 1e12)`.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed)
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV rendering with LF line endings and empty fields for nulls.
pub fn curves_to_csv(rows: &[CurveRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let opt = |v: Option<f64>| v.map(format_sig12).unwrap_or_default();
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_sig12(r.rho),
            opt(r.delta_coro_ag_eq1),
            opt(r.delta_coro_ag_eq2),
            opt(r.delta_cormu),
            csv_field(&r.branch)
        );
    }
    out
}

/// A point `(nu, m, mu, n)` of a code sequence together with the normalised
/// finite small-codimension bound `g_auth(m) / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FinitePoint {
    pub nu: u32,
    pub n: i64,
    pub m: i64,
    pub mu: i64,
    pub normalized: f64,
}

/// Finite counterpart of `g(rho)` at level `nu`, with
/// `n = ell^{nu-1}(q - sqrt(q))`, `m = round(rho n)` and `mu = round(r_tilde n)`.
pub fn finite_propemme_normalized(ell: u64, nu: u32, rho: f64, r_tilde: f64) -> Result<FinitePoint> {
    let params = TowerParams::new(ell, nu)?;
    let n = (params.ell_pow(nu - 1)? * (params.q() - ell as i128)) as i64;
    let m = ((rho * n as f64).round() as i64).max(1);
    let mu = ((r_tilde * n as f64).round() as i64).max(m);
    let g = propemme_g(params, mu, m)?;
    Ok(FinitePoint {
        nu,
        n,
        m,
        mu,
        normalized: g.g_auth / n as f64,
    })
}
