//! The `kroger` binary end to end.

use std::process::Command;

fn kroger(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_kroger")).args(args).output().expect("binary runs")
}

#[test]
fn kroger_table_csv() {
    let out = kroger(&["kroger", "--k", "3", "--d", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,d,bound,computed,relative_error");
    assert_eq!(lines.len(), 7);
    assert!(lines[5].starts_with("2,3,8.8826439609804"));
    assert!(lines[5].ends_with(",,"));
}

#[test]
fn constant_reports_the_q_violation() {
    let out = kroger(&["constant"]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["schema"], 1);
    assert!((json["constant"].as_f64().unwrap() - 0.432).abs() < 0.003);
    let report: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(report["violations"][0]["check"], "q_monotone");
}

#[test]
fn mu_on_polygon_file_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("square.txt");
    std::fs::write(&poly, "# unit square\n0 0\n1 0\n1 1\n0 1\n").unwrap();
    let out_path = dir.path().join("mu.json");
    let out = kroger(&["mu", "--k", "2", "--h", "0.05", "--polygon", poly.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let mu: Vec<f64> = json["mu"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert!(mu[0].abs() < 1e-8);
    assert!((mu[1] - std::f64::consts::PI.powi(2)).abs() < 0.05);

    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{"schema": 1, "command": "sl", "k": 2, "d": 2, "n_elems": 512, "format": "csv"}"#).unwrap();
    let out = kroger(&["--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("index,mu\n0,"));
}

#[test]
fn sharpness_writes_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sweep.csv");
    let out = kroger(&["sharpness", "--alpha-steps", "4", "--h", "0.04", "--format", "csv", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read_to_string(&out_path).unwrap().lines().count(), 5);
    assert!(dir.path().join("sweep.deficit.csv").exists());
    assert!(dir.path().join("sweep.bounds.csv").exists());
}

#[test]
fn seeded_runs_are_reproducible() {
    let args = ["estimate-c", "--n", "6", "--seed", "42", "--h", "0.05", "--format", "csv"];
    let a = kroger(&args);
    let b = kroger(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8_lossy(&a.stdout).lines().count(), 7);
}

#[test]
fn invalid_input_is_an_error() {
    assert_eq!(kroger(&["mu", "--d", "3"]).status.code(), Some(2));
    assert_eq!(kroger(&["sharpness", "--alpha-min", "0.5"]).status.code(), Some(2));
    assert_eq!(kroger(&["nonsense"]).status.code(), Some(2));
    assert_eq!(kroger(&["mu", "--polygon", "/nonexistent/file"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0 0\n1 0\n0.5 0.1\n0.5 1\n0 0.5 7\n").unwrap();
    assert_eq!(kroger(&["mu", "--polygon", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn symmetric_verification_passes_on_a_triangle() {
    let out = kroger(&["verify", "--symmetric", "--alpha", "2.5132741228718345", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(json["rows"][0]["result"]["margin"].as_f64().unwrap() > 0.0);
}
