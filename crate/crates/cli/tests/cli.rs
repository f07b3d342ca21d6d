//! End-to-end checks of the binary: exit codes, report shape, and the
//! emit → re-ingest round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("bk-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn run_k22_reports_the_loop() {
    let out = bk(&["run", "--scenario", "k22", "--t", "1.5"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let complexes = report["complexes"].as_array().unwrap();
    assert_eq!(complexes.len(), 1);
    assert_eq!(complexes[0]["betti"], serde_json::json!([1, 1]));
    assert_eq!(
        complexes[0]["simplices"][1],
        serde_json::json!([[0, 2], [0, 3], [1, 2], [1, 3]])
    );
}

#[test]
fn run_kmn_rank() {
    let out = bk(&["run", "--scenario", "kmn", "--m", "3", "--n", "4", "--t", "1.0"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["complexes"][0]["betti"], serde_json::json!([1, 6]));
}

#[test]
fn cech_grid_stages() {
    let out = bk(&[
        "run",
        "--scenario",
        "cp-cech-intrinsic-vs-ambient",
        "--t-grid",
        "0.4,0.6,1.0",
        "--complex",
        "cech-ambient",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let counts: Vec<Vec<u64>> = report["complexes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            c["simplexCounts"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_u64().unwrap())
                .collect()
        })
        .collect();
    assert_eq!(counts, vec![vec![3], vec![3, 2], vec![3, 3, 1]]);
}

#[test]
fn roundtrip_report_is_bit_exact() {
    let first = tmp("first.json");
    let second = tmp("second.json");
    let out = bk(&[
        "run",
        "--scenario",
        "k22",
        "--t",
        "1.5",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = bk(&[
        "run",
        "--file",
        first.to_str().unwrap(),
        "--t",
        "1.5",
        "--out",
        second.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let a: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&first).unwrap()).unwrap();
    let b: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&second).unwrap()).unwrap();
    assert_eq!(a["distanceTable"], b["distanceTable"]);
    assert_eq!(a["complexes"], b["complexes"]);
    let _ = std::fs::remove_file(first);
    let _ = std::fs::remove_file(second);
}

#[test]
fn validate_exit_codes() {
    let good = tmp("good.json");
    std::fs::write(
        &good,
        r#"{"params": {"lambda": 1.0, "alpha": 1.0, "p": 2},
            "cSide": {"model": "scalar", "points": [0, 1, 4], "anchor": 1}}"#,
    )
    .unwrap();
    let out = bk(&["validate", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let bad = tmp("bad.json");
    std::fs::write(
        &bad,
        r#"{"params": {"lambda": 1.0, "alpha": 1.0, "p": 2},
            "cSide": {"model": "explicit", "anchor": 0,
                      "distances": [[0,1,5],[1,0,1],[5,1,0]]}}"#,
    )
    .unwrap();
    let out = bk(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("(0,1,2)"), "{stderr}");
    let _ = std::fs::remove_file(good);
    let _ = std::fs::remove_file(bad);
}

#[test]
fn validate_warns_on_cb_norm_bound() {
    let warn = tmp("warn.json");
    std::fs::write(
        &warn,
        r#"{"params": {"lambda": 1.0, "alpha": 1.0, "p": "inf"},
            "cSide": {"model": "scalar", "points": [0, 1], "anchor": 0},
            "ySide": {"distances": [[0.0, 0.9], [0.9, 0.0]], "cbNorms": [0.25]}}"#,
    )
    .unwrap();
    let out = bk(&["validate", warn.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("warning"), "{stderr}");
    assert!(stderr.contains("cbNorms"), "{stderr}");
    let _ = std::fs::remove_file(warn);
}

#[test]
fn audit_flag_attaches_results() {
    let out = bk(&["run", "--scenario", "k22", "--t-grid", "0.5,1.5", "--audit"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let audits = &report["audits"];
    assert_eq!(audits["decompositionVerified"], serde_json::json!(true));
    assert_eq!(audits["scales"].as_array().unwrap().len(), 2);
    assert_eq!(audits["attachment"].as_array().unwrap().len(), 3);
}

#[test]
fn csv_emission() {
    let out = bk(&["run", "--scenario", "mixed-loop", "--emit", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("t,beta0"));
    assert!(text.lines().any(|l| l.starts_with("1.5,1,1")));
}

#[test]
fn reproduce_paper_passes_and_lists() {
    let out = bk(&["reproduce-paper", "--list"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("k22"));
    assert!(text.contains("13"));

    let out = bk(&["reproduce-paper"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches("[PASS]").count(), 13);
}

#[test]
fn missing_source_is_a_usage_error() {
    let out = bk(&["run", "--t", "1.0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solver_tolerance_env_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_bk"))
        .args(["run", "--scenario", "cp-hellinger-dim2", "--complex", "cech-ambient"])
        .env("BK_SOLVER_TOL", "bogus")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_bk"))
        .args(["run", "--scenario", "cp-hellinger-dim2", "--complex", "cech-ambient"])
        .env("BK_SOLVER_TOL", "1e-7")
        .output()
        .unwrap();
    assert!(out.status.success());
}
