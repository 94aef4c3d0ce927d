use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weinorman")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn roots_json() {
    for (g, n) in [("A2", 3), ("G2", 6), ("A1+T1", 1)] {
        let out = run(&["roots", "--group", g, "--format", "json"]);
        assert!(out.status.success(), "{}", g);
        assert_eq!(json(&out)["positive_roots"].as_array().unwrap().len(), n, "{}", g);
    }
}

#[test]
fn hierarchy_modes() {
    let out = run(&["hierarchy", "--group", "A1", "--format", "json"]);
    assert!(out.status.success());
    let h = json(&out);
    assert_eq!(h["factor_count"], 3);
    let kinds: Vec<&str> = h["stages"].as_array().unwrap().iter().map(|s| s["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["riccati", "torus", "integral"]);

    let out = run(&["hierarchy", "--group", "G2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("G2"));

    let out = run(&["hierarchy", "--group", "G2", "--mode", "contact", "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["mode"], "contact");
}

#[test]
fn emit_formats() {
    let out = run(&["emit", "--group", "A1", "--format", "json"]);
    assert!(out.status.success());
    assert!(json(&out)["stages"].is_array());
    for f in ["text", "latex"] {
        let out = run(&["emit", "--group", "A2", "--format", f]);
        assert!(out.status.success(), "{}", f);
        assert!(!out.stdout.is_empty());
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a1.json");
    let out = run(&["emit", "--group", "A1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["group"], json(&run(&["emit", "--group", "A1", "--format", "json"]))["group"]);
}

#[test]
fn solve_zero_input_stays_zero() {
    let out = run(&["solve", "--group", "B2", "--horizon", "0.1", "--step", "0.01"]);
    assert!(out.status.success());
    for f in json(&out)["factors"].as_array().unwrap() {
        for row in f["values"].as_array().unwrap() {
            assert!(row.as_array().unwrap().iter().all(|x| x.as_f64() == Some(0.0)));
        }
    }
}

#[test]
fn solve_reports_breakdown() {
    let input = r#"{"E[1]": {"type": "const", "value": 1}, "E[-1]": {"type": "const", "value": -1}}"#;
    let out = run(&["solve", "--group", "A1", "--input", input, "--horizon", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let status = &json(&out)["status"];
    let t = status["time"].as_f64().unwrap();
    assert!((t - std::f64::consts::FRAC_PI_2).abs() < 0.01, "{}", t);
}

#[test]
fn solve_reads_input_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    std::fs::write(&path, r#"{"H1": {"type": "poly", "coeffs": [0, 1]}}"#).unwrap();
    let out = run(&["solve", "--group", "A1", "--input", path.to_str().unwrap(), "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1002);

    let out = run(&["solve", "--group", "A1", "--input", "/no/such/file.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_against_oracle() {
    let out = run(&["verify", "--group", "A1", "--input", r#"{"E[1]": {"type": "const", "value": 1}}"#]);
    assert!(out.status.success());
    let out = run(&["verify", "--group", "C2", "--seed", "7", "--cases", "3", "--jobs", "2"]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["cases"].as_array().unwrap().len(), 3);
    for c in report["cases"].as_array().unwrap() {
        assert!(c["sup_error"].as_f64().unwrap() < 1e-6);
    }
}

#[test]
fn corrupted_run_fails_tolerance() {
    let out = run(&["verify", "--group", "A2", "--seed", "1", "--corrupt"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(json(&out)["cases"][0]["sup_error"].as_f64().unwrap() >= 1e-2);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["roots", "--group", "Q3"]).status.code(), Some(2));
    assert_eq!(run(&["roots", "--group", "A2", "--format", "latex"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["solve", "--group", "A3", "--seed", "11", "--horizon", "0.5", "--format", "csv"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
