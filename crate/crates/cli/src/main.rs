use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gs_rghw::asymptotics::{
    coro_ag_delta, cormu2_m, cormu_continuity, cormu_g, curves_to_csv, sample_curves, BetaSource,
    CurveConfig,
};
use gs_rghw::closed::{
    ghw_abundant, ghw_basic, ghw_beyond_genus, highest_rghw, propemme_bound, propemme_g,
    propmu_closed, ClosedFormSign,
};
use gs_rghw::explicit::build_explicit;
use gs_rghw::ledger::to_json_lines;
use gs_rghw::ramp::{pair_report, scheme_report, BoundEntry, DualInput};
use gs_rghw::rghw::{rghw_lower_exact, DEFAULT_BUDGET};
use gs_rghw::verify::{run_verify, VerifyConfig};
use gs_rghw::{build_recursive, CodePairSpec, Error, SemigroupTable, TowerParams, ZOptions};

const EXIT_VERIFY: u8 = 1;
const EXIT_PARAMS: u8 = 2;
const EXIT_WORKLOAD: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "gsrghw", version, about = "Semigroups and RGHW bounds for the second Garcia–Stichtenoth tower")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Workload budget for exhaustive enumeration, in estimated steps.
    #[arg(long, global = true, env = "GSRGHW_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,

    /// Run enumerations even when they exceed the budget.
    #[arg(long, global = true)]
    force: bool,

    /// Worker threads for enumeration; 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the Weierstrass semigroup H(Q_nu).
    Semigroup {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        nu: u32,
        #[arg(long, value_enum, default_value_t = Method::Recursive)]
        method: Method,
    },
    /// Evaluate one bound on (relative) generalized Hamming weights.
    Bound(BoundArgs),
    /// Asymptotic bounds and curves.
    Asym(AsymArgs),
    /// Run the oracle suites and print the discrepancy ledger.
    Verify {
        #[arg(long, default_value_t = 3)]
        max_ell: u64,
        #[arg(long, default_value_t = 6)]
        max_nu: u32,
        #[arg(long, default_value_t = 12)]
        max_mu: i64,
        /// Replace H(2, 4) by a corrupted table.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Ramp secret-sharing thresholds for a one-point pair.
    Ramp(RampArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Recursive,
    Explicit,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    Teomu,
    Propemme,
    #[value(name = "propAG")]
    PropAg,
    #[value(name = "propAGnew")]
    PropAgNew,
    Propmu,
    Singleton,
    Highest,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sign {
    Minus,
    Plus,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long)]
    ell: u64,
    #[arg(long)]
    nu: u32,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    mu1: Option<i64>,
    /// Pole order of the subcode; omit for plain GHWs where allowed.
    #[arg(long, allow_hyphen_values = true)]
    mu2: Option<i64>,
    /// `mu` for the highest-RGHW closed form.
    #[arg(long)]
    mu: Option<i64>,
    #[arg(long)]
    m: Option<i64>,
    /// Code dimension, when not derived from `mu1`.
    #[arg(long)]
    k: Option<i64>,
    #[arg(long, value_enum, default_value_t = Sign::Minus)]
    sign: Sign,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AsymWhich {
    Curves,
    Coroag,
    Cormu,
    Cormu2,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct AsymArgs {
    #[arg(long, value_enum)]
    which: AsymWhich,
    #[arg(long)]
    q: u64,
    /// Dimension rate R.
    #[arg(long)]
    r: Option<f64>,
    /// mu1 / n.
    #[arg(long)]
    rtilde: Option<f64>,
    /// mu2 / n, for relative weights.
    #[arg(long, default_value_t = 0.0)]
    rtilde2: f64,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    r1: Option<f64>,
    #[arg(long)]
    r2: Option<f64>,
    /// start:step:end, inclusive.
    #[arg(long)]
    grid: Option<String>,
    /// Take the threshold beta from this R instead of R~.
    #[arg(long)]
    beta_from_r: Option<f64>,
    /// Report the 1 - R2 branch as exact.
    #[arg(long)]
    assert_hypotheses: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct RampArgs {
    #[arg(long)]
    n: i64,
    #[arg(long)]
    ell: Option<u64>,
    #[arg(long)]
    nu: Option<u32>,
    #[arg(long)]
    mu1: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    mu2: Option<i64>,
    /// Primal lower bounds M_1..M_l, comma separated, instead of a pair.
    #[arg(long, value_delimiter = ',')]
    primal_vector: Option<Vec<i64>>,
    /// Pole orders (mu1⊥, mu2⊥) asserted to describe C2⊥ ⊃ C1⊥.
    #[arg(long)]
    dual_mu1: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    dual_mu2: Option<i64>,
    /// Dual lower bounds M_1..M_l, comma separated.
    #[arg(long, value_delimiter = ',')]
    dual_vector: Option<Vec<i64>>,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Workload { .. } => EXIT_WORKLOAD,
            _ => EXIT_PARAMS,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_PARAMS,
        message: message.into(),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| usage(format!("--{flag} is required here")))
}

/// What a subcommand produced, and the exit code it asks for.
struct Outcome {
    body: String,
    code: u8,
}

impl Outcome {
    fn json(v: Value) -> Self {
        let mut body = serde_json::to_string_pretty(&v).expect("serialisable");
        body.push('\n');
        Outcome { body, code: 0 }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serialisable")
}

fn table_for(ell: u64, nu: u32) -> Result<SemigroupTable, Failure> {
    let params = TowerParams::new(ell, nu)?;
    for w in params.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(build_recursive(params)?)
}

fn cmd_semigroup(ell: u64, nu: u32, method: Method) -> Result<Outcome, Failure> {
    let params = TowerParams::new(ell, nu)?;
    for w in params.warnings() {
        eprintln!("warning: {w}");
    }
    let explicit = match method {
        Method::Recursive => None,
        _ => Some(build_explicit(params)?),
    };
    let mut doc = match method {
        Method::Explicit => {
            let e = explicit.as_ref().expect("built above");
            let c = e.conductor();
            let small: Vec<i64> = e
                .membership_vector(c)
                .iter()
                .enumerate()
                .filter(|&(x, &m)| m && (x as i64) < c)
                .map(|(x, _)| x as i64)
                .collect();
            json!({
                "ell": ell,
                "nu": nu,
                "conductor": c,
                "gaps": c - small.len() as i64,
                "small_elements": small,
                "s_sets": e.sets,
            })
        }
        _ => to_value(&build_recursive(params)?.to_doc()),
    };
    doc["method"] = json!(format!("{method:?}").to_lowercase());
    if let Method::Both = method {
        let table = build_recursive(params)?;
        let e = explicit.expect("built above");
        let c = table.conductor().max(e.conductor());
        let a = table.membership_vector(c);
        let b = e.membership_vector(c);
        let diff: Vec<i64> = (0..=c).filter(|&x| a[x as usize] != b[x as usize]).collect();
        doc["equal"] = json!(diff.is_empty() && table.conductor() == e.conductor());
        doc["differences"] = json!(diff);
        doc["s_sets"] = json!(e.sets);
    }
    Ok(Outcome::json(doc))
}

fn cmd_bound(a: &BoundArgs, opts: ZOptions) -> Result<Outcome, Failure> {
    let table = table_for(a.ell, a.nu)?;
    let params = table.params();
    let pair = || -> Result<CodePairSpec, Failure> {
        let n = need(a.n, "n")?;
        let mu1 = need(a.mu1, "mu1")?;
        let mu2 = need(a.mu2, "mu2")?;
        Ok(CodePairSpec::new(n, mu1, mu2, &table)?)
    };
    let dimension = || -> Result<i64, Failure> {
        match a.k {
            Some(k) => Ok(k),
            None => Ok(table.dimension(need(a.mu1, "mu1 or --k")?, need(a.n, "n")?)?),
        }
    };
    let v = match a.which {
        Which::Teomu => {
            let p = pair()?;
            let b = rghw_lower_exact(&p, &table, need(a.m, "m")?, opts)?;
            json!({"bound": b, "pair": p})
        }
        Which::Propemme => {
            let p = pair()?;
            let m = need(a.m, "m")?;
            let b = propemme_bound(&p, params, m)?;
            let g = propemme_g(params, p.mu_diff, m)?;
            json!({"bound": b, "pair": p, "small_codimension": g})
        }
        Which::PropAg => {
            let b = ghw_abundant(need(a.n, "n")?, need(a.mu1, "mu1")?, a.mu2, &table, need(a.m, "m")?)?;
            json!({"bound": b})
        }
        Which::PropAgNew => {
            let b = ghw_basic(need(a.n, "n")?, dimension()?, &table, need(a.m, "m")?)?;
            to_value(&b)
        }
        Which::Propmu => {
            let sign = match a.sign {
                Sign::Minus => ClosedFormSign::Minus,
                Sign::Plus => ClosedFormSign::Plus,
            };
            to_value(&propmu_closed(&table, need(a.mu, "mu")?, sign)?)
        }
        Which::Singleton => {
            let b = ghw_beyond_genus(need(a.n, "n")?, dimension()?, need(a.m, "m")?, &table)?;
            json!({"bound": b})
        }
        Which::Highest => {
            let p = pair()?;
            let h = highest_rghw(&p, &table, opts)?;
            json!({"highest": h, "pair": p})
        }
    };
    Ok(Outcome::json(v))
}

fn parse_grid(s: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("grid must be start:step:end with step > 0, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let (start, step, end) = (nums[0], nums[1], nums[2]);
    if !step.is_finite() || step <= 0.0 || end < start || !start.is_finite() || !end.is_finite() {
        return Err(bad());
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(usage(format!("grid has {count} points")));
    }
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

fn beta_source(a: &AsymArgs) -> BetaSource {
    a.beta_from_r.map(BetaSource::R).unwrap_or_default()
}

fn cmd_asym(a: &AsymArgs) -> Result<Outcome, Failure> {
    match a.which {
        AsymWhich::Curves => {
            let rt1 = need(a.rtilde, "rtilde")?;
            let config = CurveConfig {
                r: a.r.unwrap_or(rt1),
                r_tilde1: rt1,
                r_tilde2: a.rtilde2,
                beta_source: beta_source(a),
            };
            let grid = parse_grid(&need(a.grid.clone(), "grid")?)?;
            let rows = sample_curves(a.q, config, &grid)?;
            if a.format == Some(Format::Json) {
                Ok(Outcome::json(json!({"q": a.q, "config": config, "rows": rows})))
            } else {
                Ok(Outcome {
                    body: curves_to_csv(&rows),
                    code: 0,
                })
            }
        }
        AsymWhich::Coroag => {
            let rt = need(a.rtilde, "rtilde")?;
            let d = coro_ag_delta(a.q, a.r.unwrap_or(rt), rt, need(a.rho, "rho")?)?;
            Ok(Outcome::json(to_value(&d)))
        }
        AsymWhich::Cormu => {
            let rt = need(a.rtilde, "rtilde")?;
            let g = cormu_g(a.q, need(a.rho, "rho")?, rt, beta_source(a))?;
            let k = cormu_continuity(a.q, rt, beta_source(a))?;
            Ok(Outcome::json(json!({"g": g, "continuity": k})))
        }
        AsymWhich::Cormu2 => {
            let m = cormu2_m(a.q, need(a.r1, "r1")?, need(a.r2, "r2")?, a.assert_hypotheses)?;
            Ok(Outcome::json(to_value(&m)))
        }
    }
}

fn cmd_verify(cfg: VerifyConfig) -> Result<Outcome, Failure> {
    let report = run_verify(&cfg)?;
    for s in &report.suites {
        eprintln!("{:<28} cases {:>5}  violations {}", s.suite, s.cases, s.violations);
    }
    eprintln!(
        "{} ledger records, {} outside the known-errata allowlist (version {})",
        report.records.len(),
        report.unexpected.len(),
        report.errata_version
    );
    for r in &report.unexpected {
        eprintln!("unexpected: {}", r.to_json_line());
    }
    Ok(Outcome {
        body: to_json_lines(&report.records),
        code: if report.passed() { 0 } else { EXIT_VERIFY },
    })
}

fn cmd_ramp(a: &RampArgs, opts: ZOptions) -> Result<Outcome, Failure> {
    let dual = match (&a.dual_vector, a.dual_mu1, a.dual_mu2) {
        (Some(v), None, None) => DualInput::Vector(BoundEntry::user_vector(v)),
        (None, Some(mu1), Some(mu2)) => DualInput::AssertedPair { mu1, mu2 },
        _ => {
            return Err(usage(
                "supply either --dual-vector or both --dual-mu1 and --dual-mu2",
            ))
        }
    };
    let report = if let Some(primal) = &a.primal_vector {
        let DualInput::Vector(d) = &dual else {
            return Err(usage("--primal-vector needs --dual-vector"));
        };
        scheme_report(a.n, &BoundEntry::user_vector(primal), d)?
    } else {
        let table = table_for(need(a.ell, "ell")?, need(a.nu, "nu")?)?;
        let pair = CodePairSpec::new(a.n, need(a.mu1, "mu1")?, need(a.mu2, "mu2")?, &table)?;
        pair_report(&pair, &dual, &table, opts)?
    };
    Ok(Outcome::json(to_value(&report)))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    if cli.budget == 0 {
        return Err(usage("--budget must be positive"));
    }
    if cli.threads == 0 {
        return Err(usage("--threads must be positive"));
    }
    let opts = ZOptions {
        budget: cli.budget,
        force: cli.force,
        parallel: cli.threads > 1,
    };
    match &cli.command {
        Command::Semigroup { ell, nu, method } => cmd_semigroup(*ell, *nu, *method),
        Command::Bound(a) => cmd_bound(a, opts),
        Command::Asym(a) => cmd_asym(a),
        Command::Verify {
            max_ell,
            max_nu,
            max_mu,
            inject_fault,
        } => cmd_verify(VerifyConfig {
            max_ell: *max_ell,
            max_nu: *max_nu,
            max_mu: *max_mu,
            budget: cli.budget,
            inject_fault: *inject_fault,
            parallel: opts.parallel,
        }),
        Command::Ramp(a) => cmd_ramp(a, opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 1 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("warning: could not configure thread pool: {e}");
        }
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &outcome.body),
        None => std::io::stdout().write_all(outcome.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_PARAMS);
    }
    ExitCode::from(outcome.code)
}
