use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsrghw"))
        .args(args)
        .env_remove("GSRGHW_BUDGET")
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).expect("golden file present")
}

fn assert_golden(args: &[&str], name: &str) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden(name), "{args:?}");
}

#[test]
fn semigroup_outputs() {
    assert_golden(&["semigroup", "--ell", "2", "--nu", "1"], "semigroup_2_1.json");
    assert_golden(&["semigroup", "--ell", "3", "--nu", "6", "--method", "both"], "semigroup_3_6_both.json");
}

#[test]
fn odd_level_explicit_is_rejected() {
    let out = run(&["semigroup", "--ell", "2", "--nu", "3", "--method", "explicit"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("construction undefined for odd level"));
}

#[test]
fn bound_outputs() {
    assert_golden(&["bound", "--which", "propmu", "--ell", "2", "--nu", "4", "--mu", "4"], "bound_propmu_2_4_4.json");
    assert_golden(
        &["bound", "--which", "teomu", "--ell", "2", "--nu", "4", "--n", "50", "--mu1", "20", "--mu2", "16", "--m", "4"],
        "bound_teomu_2_4.json",
    );
    let v: serde_json::Value = serde_json::from_str(&golden("bound_propmu_2_4_4.json")).unwrap();
    assert_eq!((v["paper_value"].as_i64(), v["oracle_value"].as_i64(), v["delta"].as_i64()), (Some(4), Some(8), Some(4)));
}

#[test]
fn first_weight_is_n_minus_mu1() {
    let out = run(&["bound", "--which", "teomu", "--ell", "2", "--nu", "4", "--n", "50", "--mu1", "20", "--mu2", "16", "--m", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["bound"]["value"].as_i64(), Some(30));
}

#[test]
fn every_bound_kind_runs() {
    let common = ["--ell", "2", "--nu", "4", "--n", "40", "--mu1", "20", "--m", "2"];
    for which in ["propemme", "propAG", "propAGnew", "singleton", "highest"] {
        let mut args = vec!["bound", "--which", which, "--mu2", "12"];
        args.extend(common);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{which}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn workload_guard_exit_code() {
    let out = run(&["--budget", "10", "bound", "--which", "teomu", "--ell", "2", "--nu", "4", "--n", "50", "--mu1", "20", "--mu2", "8", "--m", "5"]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_gsrghw"))
        .args(["verify"])
        .env("GSRGHW_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn curves_and_cormu2() {
    let args = ["asym", "--which", "curves", "--q", "64", "--rtilde", "0.02", "--grid", "0:0.001:0.015"];
    assert_golden(&args, "curves_q64.csv");
    assert!(golden("curves_q64.csv").starts_with("rho,delta_coro_ag_eq1,delta_coro_ag_eq2,delta_cormu,branch\n"));
    assert_golden(
        &["asym", "--which", "cormu2", "--q", "16", "--r1", "0.72", "--r2", "0.6", "--assert-hypotheses"],
        "cormu2_q16_singleton.json",
    );
    let out = run(&["asym", "--which", "curves", "--q", "64", "--rtilde", "0.95", "--grid", "2:1:3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    assert_golden(&["verify"], "verify_default.jsonl");
    let ledger = golden("verify_default.jsonl");
    for method in ["genus-formula", "example-651", "propmu-closed-form"] {
        assert!(ledger.contains(&format!(r#""method":"{method}""#)), "{method}");
    }
    assert_eq!(run(&["verify", "--inject-fault"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--budget", "10"]).status.code(), Some(3));
}

#[test]
fn ramp_is_identical_across_threads() {
    let args = ["ramp", "--ell", "2", "--nu", "4", "--n", "40", "--mu1", "25", "--mu2", "17", "--dual-mu1", "39", "--dual-mu2", "31"];
    assert_golden(&args, "ramp_n40.json");
    for threads in ["1", "2", "4"] {
        let mut a = vec!["--threads", threads];
        a.extend(args);
        assert_golden(&a, "ramp_n40.json");
    }
    let toy = run(&["ramp", "--n", "10", "--primal-vector", "7,8", "--dual-vector", "5,6"]);
    assert_eq!(toy.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&toy.stderr).contains("index 1"));
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("gsrghw-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let out = run(&["--output", path.to_str().unwrap(), "semigroup", "--ell", "2", "--nu", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden("semigroup_2_1.json"));
    std::fs::remove_dir_all(dir).unwrap();
}
