//! End-to-end tests of the `steering` binary: output formats, exit codes,
//! and the CSV round-trip guarantee.

use std::path::PathBuf;
use std::process::{Command, Output};

fn steering(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steering"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn write_tmp(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).expect("write temp file");
    path
}

const VACUUM: &str =
    r#"{"n_modes_a": 1, "n_modes_b": 1, "matrix": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#;

#[test]
fn boundary_werner_quoted_row() {
    let out = steering(&["boundary", "werner", "--grid", "2,3,4,5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "param,eta_ent,eta_steer,eta_steer_kind,eta_bell_lower,eta_bell_upper"
    );
    assert_eq!(
        lines.next().unwrap(),
        "2,0.333333333,0.5,exact,0.6595,0.707106781"
    );
    assert_eq!(text.lines().count(), 5);
    assert!(out.stderr.is_empty(), "stdout carries only data");
}

#[test]
fn boundary_inept_exact_override_at_half() {
    let out = steering(&["boundary", "inept", "--grid", "0.5"]);
    assert!(out.status.success());
    let row = stdout(&out).lines().nth(1).unwrap().to_string();
    let cells: Vec<&str> = row.split(',').collect();
    assert_eq!(cells[2], "0.5");
    assert_eq!(cells[3], "exact");
}

#[test]
fn boundary_gaussian_json_sweep() {
    let out = steering(&[
        "boundary",
        "gaussian-symmetric",
        "--grid",
        "0.1:10:50",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    let records = parsed.as_array().expect("array");
    assert_eq!(records.len(), 50);
    let first = &records[0];
    assert!((first["param"].as_f64().unwrap() - 0.1).abs() < 1e-9);
    assert_eq!(first["eta_steer_kind"], "upper_bound");
    assert!(first["eta_bell_lower"].is_null());
    assert_eq!(first["eta_bell_upper"].as_f64(), Some(1.0));
}

#[test]
fn csv_roundtrip_is_exact() {
    let out = steering(&["boundary", "inept", "--grid", "0.05:0.95:19"]);
    assert!(out.status.success());
    let text = stdout(&out);
    // re-parse each param, recompute, re-render: byte-identical rows
    for line in text.lines().skip(1) {
        let param: f64 = line.split(',').next().unwrap().parse().unwrap();
        let again = steering(&["boundary", "inept", "--grid", &format!("{param}")]);
        let again_text = stdout(&again);
        assert_eq!(again_text.lines().nth(1).unwrap(), line);
    }
}

#[test]
fn boundary_output_file_and_env_dir() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let out = Command::new(env!("CARGO_BIN_EXE_steering"))
        .args(["boundary", "werner", "--grid", "2", "--output", "sweep.csv"])
        .env("STEERING_OUTPUT_DIR", &dir)
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let written = std::fs::read_to_string(dir.join("sweep.csv")).expect("file written");
    assert!(written.starts_with("param,"));
}

#[test]
fn simulate_emits_expected_json_keys() {
    let out = steering(&[
        "simulate", "isotropic", "--d", "4", "--eta", "0.2", "--shots", "20000", "--seed", "1",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    for key in [
        "empirical",
        "std_error",
        "theoretical_quantum",
        "theoretical_cheat_bound",
        "verdict",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    // η/d + (1-η)/d² = 0.1 < H₄/16 → not steerable
    assert_eq!(v["verdict"], "not_steerable_at_this_eta");
    assert!((v["theoretical_quantum"].as_f64().unwrap() - 0.1).abs() < 1e-9);
}

#[test]
fn simulate_inept_verdict_follows_condition_sign() {
    let out = steering(&[
        "simulate", "inept", "--epsilon", "0.3", "--eta", "0.7", "--shots", "50000", "--seed", "7",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    let quantum = v["theoretical_quantum"].as_f64().unwrap();
    let cheat = v["theoretical_cheat_bound"].as_f64().unwrap();
    let verdict = v["verdict"].as_str().unwrap();
    assert_eq!(verdict == "steerable", quantum > cheat);
}

#[test]
fn exit_codes() {
    // usage errors → 2
    assert_eq!(
        steering(&["boundary", "werner", "--grid", "abc"]).status.code(),
        Some(2)
    );
    assert_eq!(steering(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        steering(&["simulate", "werner", "--eta", "0.5", "--shots", "10", "--seed", "1"])
            .status
            .code(),
        Some(2),
        "missing --d is a usage error"
    );
    // domain errors → 1
    assert_eq!(
        steering(&["boundary", "werner", "--grid", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        steering(&["boundary", "inept", "--grid", "0.0"]).status.code(),
        Some(1)
    );
    let out = steering(&["boundary", "werner", "--grid", "1"]);
    assert!(!out.stderr.is_empty(), "diagnostics go to stderr");
    assert!(out.stdout.is_empty());
}

#[test]
fn gaussian_exit_codes_and_payloads() {
    let vacuum = write_tmp("vacuum.json", VACUUM);
    let out = steering(&["gaussian", "check", "--cm", vacuum.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(v["valid"], true);
    assert_eq!(v["separable"], true);
    assert_eq!(v["steerable"], false);
    assert_eq!(v["reid_product"].as_f64(), Some(1.0));

    // below-vacuum CM → domain error 1
    let below = write_tmp(
        "below.json",
        r#"{"n_modes_a": 1, "n_modes_b": 1,
            "matrix": [[0.5,0,0,0],[0,0.5,0,0],[0,0,0.5,0],[0,0,0,0.5]]}"#,
    );
    let out = steering(&["gaussian", "check", "--cm", below.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid covariance matrix"));

    // malformed JSON → usage error 2
    let broken = write_tmp("broken.json", "{not json");
    assert_eq!(
        steering(&["gaussian", "check", "--cm", broken.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        steering(&["gaussian", "check", "--cm", "/no/such/file.json"]).status.code(),
        Some(2)
    );

    // witness on non-steerable input → 1; ensemble works
    assert_eq!(
        steering(&["gaussian", "witness", "--cm", vacuum.to_str().unwrap()]).status.code(),
        Some(1)
    );
    let out = steering(&["gaussian", "ensemble", "--cm", vacuum.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(v["u"][0][0].as_f64(), Some(1.0));
}

#[test]
fn gaussian_witness_on_steerable_state() {
    let c = (1.0f64).cosh(); // cosh 2r at r = 0.5
    let s = (1.0f64).sinh();
    let tms = write_tmp(
        "tms.json",
        &format!(
            r#"{{"n_modes_a": 1, "n_modes_b": 1,
                "matrix": [[{c},0,{s},0],[0,{c},0,{ns}],[{s},0,{c},0],[0,{ns},0,{c}]]}}"#,
            c = c,
            s = s,
            ns = -s
        ),
    );
    let out = steering(&["gaussian", "check", "--cm", tms.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(v["steerable"], true);
    let reid = v["reid_product"].as_f64().unwrap();
    assert!((reid - 1.0 / c.powi(2)).abs() < 1e-6, "reid = {reid}");

    let out = steering(&["gaussian", "witness", "--cm", tms.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    let t = v["t_a"].as_array().expect("matrix");
    assert_eq!(t.len(), 2);
}
