use std::path::Path;
use std::process::{Command, Output};

use stpred_core::datasets::first_walk;

fn stpred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stpred")).args(args).output().expect("run stpred")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn walking_csv(dir: &Path) -> String {
    let path = dir.join("walk.csv");
    first_walk().write_csv(std::fs::File::create(&path).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(stpred(&["--help"]).status.code(), Some(0));
    assert_eq!(stpred(&["--version"]).status.code(), Some(0));
}

#[test]
fn validation_errors_exit_one() {
    let cases: &[&[&str]] = &[
        &[],
        &["fit"],
        &["fit", "--summary", "1,2,3"],
        &["fit", "--summary", "1,2,-3,10"],
        &["fit", "--summary", "1,2,3,10", "--restriction", "interval"],
        &["fit", "--summary", "1,2,3,10", "--m", "2"],
        &["fit", "--data", "/nonexistent/file.csv"],
        &["risk-curve", "--deltas", "0:5"],
        &["risk-curve", "--restriction", "interval", "--m", "1", "--deltas", "0:2:0.5", "--nmc", "10"],
        &["eval", "--params", "{\"family\":\"student_t\"}", "--points", "0"],
        &["quantile", "--params", "{\"family\":\"student_t\",\"nu\":3,\"xi\":0,\"tau\":1}", "--probs", "1.5"],
        &["sample", "--params", "not json", "--n", "3"],
    ];
    for args in cases {
        let out = stpred(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn infeasible_oracle_exits_two() {
    let out = stpred(&["oracle-sample", "--summary", "-40,0,1,5", "--n", "10"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn fit_on_walking_data() {
    let dir = tempfile::tempdir().unwrap();
    let data = walking_csv(dir.path());
    let out = stpred(&["fit", "--data", &data]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["baseline"]["family"], "student_t");
    assert_eq!(v["restricted"]["family"], "skew_t");
    assert_eq!(v["baseline"]["params"]["nu"], 5.0);
    assert_eq!(v["baseline"]["p50"], 11.375);
    assert_eq!(v["baseline"]["params"]["tau"], 1.19896);
    assert_eq!(v["restricted"]["params"]["alpha0"], 1.20386);

    let csv = stdout(&stpred(&["fit", "--data", &data, "--format", "csv"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("estimator,family,nu,alpha0"));
    assert!(lines[2].starts_with("restricted,skew_t,5,1.20386,0.57735,,11.375,1.19896,"));
}

#[test]
fn fit_on_body_mass_summary_and_interval() {
    let out = stpred(&["fit", "--summary", "31,30.4,5.7,429"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["baseline"]["params"]["tau"], 0.389644);
    assert_eq!(v["summary"]["k"], 428.0);

    let out = stpred(&["fit", "--summary", "31,30.4,5.7,429", "--restriction", "interval", "--m", "6"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["restricted"]["family"], "skew_t_two_sided");
    assert_eq!(v["restriction"]["kind"], "symmetric_interval");

    let out = stpred(&["fit", "--summary", "31,30.4,5.7,429", "--restriction", "none"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v.get("restricted").is_none());
}

#[test]
fn full_precision_flag() {
    let short = stdout(&stpred(&["fit", "--summary", "31,30.4,5.7,429"]));
    let long = stdout(&stpred(&["fit", "--summary", "31,30.4,5.7,429", "--full-precision"]));
    assert!(short.contains("0.389644,") || short.contains("0.389644\n"));
    assert!(long.contains("0.38964397840405807"));
}

const T_WALK: &str = r#"{"family":"student_t","nu":5,"xi":11.37,"tau":1.2}"#;
const ST_WALK: &str = r#"{"family":"skew_t","nu":5,"alpha0":0.85,"alpha1":0.5773502691896258,"xi":11.37,"tau":1.2}"#;

#[test]
fn distribution_commands() {
    assert_eq!(stdout(&stpred(&["quantile", "--params", T_WALK, "--probs", "0.5"])), "p,quantile\n0.5,11.37\n");
    let out = stdout(&stpred(&["eval", "--params", ST_WALK, "--points", "11.37,-1e3"]));
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "x,pdf");
    let pdf: f64 = rows[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!(pdf > 0.0 && pdf.is_finite());

    let json = stdout(&stpred(&["quantile", "--params", T_WALK, "--probs", "0.1,0.9", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v[0]["quantile"], 9.59894);

    let a = stpred(&["sample", "--params", ST_WALK, "--n", "10", "--seed", "7"]);
    let b = stpred(&["sample", "--params", ST_WALK, "--n", "10", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 11);
    let c = stpred(&["sample", "--params", ST_WALK, "--n", "10", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn params_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    std::fs::write(&path, T_WALK).unwrap();
    let arg = format!("@{}", path.display());
    assert_eq!(stdout(&stpred(&["quantile", "--params", &arg, "--probs", "0.5"])), "p,quantile\n0.5,11.37\n");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<(Vec<u8>, Vec<u8>)> = (0..2)
        .map(|i| {
            let risk = dir.path().join(format!("risk{i}.csv"));
            let oracle = dir.path().join(format!("oracle{i}.csv"));
            let r = stpred(&["risk-curve", "--deltas", "0:2:1", "--nmc", "300", "--seed", "5", "--out", risk.to_str().unwrap()]);
            assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
            let o = stpred(&["oracle-sample", "--summary", "11.375,10.125,1.896,6", "--n", "500", "--seed", "5", "--out", oracle.to_str().unwrap()]);
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            (std::fs::read(risk).unwrap(), std::fs::read(oracle).unwrap())
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let risk = String::from_utf8(runs[0].0.clone()).unwrap();
    assert!(risk.starts_with("delta,risk_baseline,risk_restricted,ratio,se\n0,"));
    assert_eq!(risk.lines().count(), 4);
    assert!(String::from_utf8(runs[0].1.clone()).unwrap().starts_with("y\n"));
}

#[test]
fn single_replicate_risk_curve_runs() {
    let out = stpred(&["risk-curve", "--deltas", "0:1:1", "--nmc", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().nth(1).unwrap().ends_with(",inf"));
}

#[test]
fn reproduce_itemizes_and_writes_figures() {
    let dir = tempfile::tempdir().unwrap();
    let out = stpred(&["reproduce", "--nmc", "200", "--out", dir.path().to_str().unwrap()]);
    let code = out.status.code();
    assert!(code == Some(0) || code == Some(3), "{code:?}");
    let text = stdout(&out);
    assert!(text.contains("body mass") && text.contains("first walk") && text.contains("alpha0 (printed formula)"));
    if code == Some(3) {
        assert!(String::from_utf8_lossy(&out.stderr).contains("reproduction failed"));
    }
    for name in ["risk_positive.csv", "risk_interval.csv"] {
        let csv = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(csv.starts_with("delta,"));
    }
    let json = stpred(&["reproduce", "--nmc", "200", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["passed"].as_bool(), Some(code == Some(0)));
}
