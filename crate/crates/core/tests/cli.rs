//! End-to-end checks of the `w3j` binary: output formats, CSV schema,
//! exit codes, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn w3j(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_w3j"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn exact_closed_form_and_zero() {
    let out = w3j(&["exact", "1", "1", "0", "0", "0", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("-sqrt(1/3)"), "{text}");
    assert!(text.contains("-0.577350269190"), "{text}");

    let out = w3j(&["exact", "1", "1", "3", "0", "0", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0 (TriangleViolated)"));
}

#[test]
fn exact_oracle_match_and_half_integers() {
    let out = w3j(&["exact", "2", "2", "2", "0", "0", "0", "--oracle"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("sqrt(2/35)"), "{text}");
    assert!(text.contains("oracle: MATCH"), "{text}");

    let out = w3j(&["exact", "1/2", "0.5", "0", "1/2", "-0.5", "0", "--oracle"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("oracle: MATCH"));
}

#[test]
fn exact_json_format() {
    let out = w3j(&["exact", "2", "2", "2", "0", "0", "0", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["twice_j"], serde_json::json!([4, 4, 4]));
    assert_eq!(v["exact"]["sign"], serde_json::json!(-1));
    assert_eq!(v["exact"]["radicand"], serde_json::json!("2/35"));
}

#[test]
fn exact_parse_error_exits_2() {
    let out = w3j(&["exact", "x", "1", "0", "0", "0", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compare_statuses() {
    let out = w3j(&["compare", "2", "2", "2", "0", "0", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("status: Allowed"), "{text}");
    assert!(text.contains("exact:  -0.239045721867"), "{text}");
    assert!(text.contains("0.242504464931"), "{text}");

    let out = w3j(&["compare", "1", "1", "2", "0", "0", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("status: Caustic"), "{text}");
    assert!(text.contains("n/a"), "{text}");

    let out = w3j(&["compare", "2", "2", "2", "2", "-2", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("status: Forbidden"));
}

#[test]
fn sweep_writes_csv_with_decreasing_error() {
    let path = tmp_path("sweep_scale.csv");
    let out = w3j(&[
        "sweep", "--base-j", "2", "2", "2", "--base-m", "0", "0", "0",
        "--axis", "scale-j", "--values", "1,2,4,8",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "twice_j1,twice_j2,twice_j3,twice_m1,twice_m2,twice_m3,exact,asymptotic,S,delta_z,abs_err,status"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    let errs: Vec<f64> = rows.iter().map(|r| r[10].parse().unwrap()).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "errors not decreasing: {errs:?}");
    assert!(rows.iter().all(|r| r[11] == "Allowed"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn sweep_vary_m1_crosses_turning_point() {
    let path = tmp_path("sweep_m1.csv");
    let out = w3j(&[
        "sweep", "--base-j", "10", "10", "10", "--base-m", "0", "0", "0",
        "--axis", "vary-m1",
        "--values", "0,2,4,6,8,10",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let statuses: Vec<&str> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(statuses.first(), Some(&"Allowed"));
    assert!(
        statuses.iter().any(|s| *s == "Forbidden" || *s == "Caustic"),
        "expected a classical turning point in {statuses:?}"
    );
    std::fs::remove_file(&path).ok();
}

#[test]
fn sweep_unwritable_path_exits_2() {
    let out = w3j(&[
        "sweep", "--base-j", "2", "2", "2", "--base-m", "0", "0", "0",
        "--axis", "scale-j", "--values", "1",
        "--out", "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_empty_values_exits_2() {
    let out = w3j(&[
        "sweep", "--base-j", "2", "2", "2", "--base-m", "0", "0", "0",
        "--axis", "scale-j", "--out", "/tmp/never.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_sets_convention() {
    let cfg = tmp_path("w3j.conf");
    std::fs::write(&cfg, "convention=paper-literal\n").unwrap();
    let out = w3j(&["--config", cfg.to_str().unwrap(), "compare", "2", "2", "2", "0", "0", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("paper-literal"));

    // flag beats file
    let out = w3j(&[
        "--config", cfg.to_str().unwrap(),
        "compare", "2", "2", "2", "0", "0", "0",
        "--convention", "half-shift",
    ]);
    assert!(stdout(&out).contains("half-shift"));
    std::fs::remove_file(&cfg).ok();
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("w3j_test_{}_{name}", std::process::id()));
    p
}
