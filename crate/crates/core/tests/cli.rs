use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn conika(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conika")).args(args).env_remove("CONIKA_TOL").output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_then_certify_qubit_sic() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sic2.json");
    let built = json(&conika(&["design", "build", "--kind", "sic", "--d", "2", "--out", path_str(&file)]));
    assert_eq!(built["elements"], 4);

    let cert = json(&conika(&["design", "certify", "--in", path_str(&file)]));
    assert!((cert["k_s"].as_f64().unwrap() - 1.0 / 3.0).abs() <= 1e-10);
    assert!(cert["k_a"].as_f64().unwrap().abs() <= 1e-10);
    assert_eq!(cert["is_conical_design"], true);
    assert_eq!(cert["is_projective_design"], true);
}

#[test]
fn povm_file_round_trip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    json(&conika(&["design", "build", "--kind", "mub-depol", "--d", "3", "--t", "0.37", "--out", path_str(&first)]));
    let povm: conika::Povm = serde_json::from_str(&std::fs::read_to_string(&first).unwrap()).unwrap();
    let second = dir.path().join("b.json");
    std::fs::write(&second, serde_json::to_string_pretty(&povm).unwrap() + "\n").unwrap();
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
    let again: conika::Povm = serde_json::from_str(&std::fs::read_to_string(&second).unwrap()).unwrap();
    assert_eq!(again, povm);
}

#[test]
fn concurrence_of_phi_plus_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("phi_plus_d2.json");
    let r = std::f64::consts::FRAC_1_SQRT_2;
    std::fs::write(
        &state,
        format!(r#"{{"dim":2,"coefficients":{{"rows":2,"cols":2,"entries":[[{r},0],[0,0],[0,0],[{r},0]]}}}}"#),
    )
    .unwrap();
    let v = json(&conika(&["concurrence", "--design", "builtin:sic", "--d", "2", "--state", path_str(&state)]));
    assert!((v["concurrence_formula"].as_f64().unwrap() - 1.0).abs() <= 1e-8);
    assert!(v["difference"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn werner_scan_reports_thresholds() {
    let v = json(&conika(&["werner", "scan", "--d", "3", "--design", "builtin:sic", "--step", "0.01"]));
    let rows = v.as_array().unwrap();
    let first = |key: &str| rows.iter().find(|r| r[key] == true).unwrap()["p"].as_f64().unwrap();
    assert_eq!(first("below"), 0.51);
    assert_eq!(first("detected"), 0.67);
}

#[test]
fn witness_report_has_named_fields() {
    let v = json(&conika(&["witness", "report", "--design", "builtin:mub", "--d", "3", "--restarts", "4", "--iters", "50"]));
    for key in ["s_minus_N", "s_plus_NPT", "e_plus_NPT", "numeric_s_minus_N"] {
        assert!(v[key].is_f64(), "missing {key}");
    }
}

#[test]
fn missing_file_is_a_domain_error() {
    let out = conika(&["design", "certify", "--in", "/nonexistent/povm.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("/nonexistent/povm.json"));
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dim\": 2,\n  \"label\": oops}").unwrap();
    let out = conika(&["design", "certify", "--in", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let msg = stderr(&out);
    assert!(msg.contains("bad.json") && msg.contains("line 2"), "{msg}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(conika(&["design", "certify", "--in", "builtin:sic", "--d", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(conika(&["--tol", "0", "design", "certify", "--in", "builtin:sic", "--d", "2"]).status.code(), Some(2));
    assert_eq!(conika(&["--tol", "-1e-9", "design", "certify", "--in", "builtin:sic", "--d", "2"]).status.code(), Some(2));
    assert_eq!(conika(&["design", "build", "--kind", "sic-depol", "--d", "2"]).status.code(), Some(2));
}

#[test]
fn unsupported_design_dimension_is_a_domain_error() {
    let out = conika(&["design", "build", "--kind", "mub", "--d", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("prime"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["--seed", "7", "invariance", "--design", "builtin:sic", "--d", "3", "--state", "builtin:random", "--trials", "5"];
    let a = conika(&args);
    let b = conika(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tolerance_environment_variable_is_honoured() {
    // a depolarized design has k_s - k_a = t²·2/(d(d+1)); a huge tolerance swallows the gap
    let args = ["design", "certify", "--in", "builtin:sic-depol:t=0.25", "--d", "2"];
    assert_eq!(json(&conika(&args))["is_conical_design"], true);
    let out = Command::new(env!("CARGO_BIN_EXE_conika")).args(args).env("CONIKA_TOL", "0.1").output().unwrap();
    assert_eq!(json(&out)["is_conical_design"], false);
    let flag = conika(&["--tol", "0.1", "design", "certify", "--in", "builtin:sic-depol:t=0.25", "--d", "2"]);
    assert_eq!(json(&flag)["is_conical_design"], false);
}

#[test]
fn text_format_shows_both_conventions() {
    let out = conika(&["--format", "text", "design", "certify", "--in", "builtin:sic", "--d", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(k_s+k_a)/2") && text.contains("unhalved"), "{text}");
}
