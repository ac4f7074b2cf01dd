use std::process::{Command, Output};

use cevian_core::inequality;
use cevian_core::report::{canonical_report, read_manifest, RunConfig};

fn cevian(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cevian"))
        .args(args)
        .env_remove("CEVIAN_SEED")
        .output()
        .expect("run cevian")
}

fn code(args: &[&str]) -> i32 {
    cevian(args).status.code().expect("exit code")
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&["verify", "--sides", "3,4,5"]), 0);
    assert_eq!(code(&["verify", "--sides", "5,3,4", "--cevians", "altitude"]), 0);
    assert_eq!(code(&["verify", "--normalized", "0.6,0.8", "--cevians", "bisector"]), 0);
    assert_eq!(code(&["verify", "--sides", "1,1,2"]), 2);
    assert_eq!(code(&["verify", "--sides", "1,1"]), 2);
    assert_eq!(code(&["verify"]), 2);
    assert_eq!(code(&["verify", "--sides", "3,4,5", "--normalized", "0.6,0.8"]), 2);
}

#[test]
fn verify_median_slack_value() {
    let out = cevian(&["verify", "--sides", "3,4,5", "--cevians", "median"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let main = v["slacks"].as_array().unwrap().iter().find(|s| s["name"] == "main").unwrap();
    assert!((main["value"].as_f64().unwrap() - 1.991_256_536_323_874).abs() < 1e-12);
}

#[test]
fn verify_reports_a_failing_general_triple() {
    // feet chosen so both slacks are negative
    let out = cevian(&["verify", "--sides", "0.3,1,1", "--cevians", "general", "--feet", "0.5,0.9,0.1"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn certify_exit_codes() {
    assert_eq!(code(&["certify", "--target", "main-median"]), 0);
    assert_eq!(code(&["certify", "--target", "key-system"]), 0);
    assert_eq!(code(&["certify", "--target", "main-median", "--delta", "0", "--max-depth", "30"]), 1);
    assert_eq!(code(&["certify", "--target", "main-median", "--max-queue", "10"]), 3);
    assert_eq!(code(&["certify", "--target", "no-such-target"]), 2);
    assert_eq!(code(&["certify", "--target", "main-median", "--mu", "-1"]), 2);
}

#[test]
fn search_exit_codes() {
    assert_eq!(code(&["search", "--samples", "20000"]), 0);
    assert_eq!(code(&["search", "--samples", "20000", "--family", "median"]), 1);
    assert_eq!(code(&["search", "--mode", "open-problem", "--samples", "2000"]), 0);
    assert_eq!(code(&["search", "--samples", "0"]), 2);
}

#[test]
fn seed_comes_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.json");
    let status = Command::new(env!("CARGO_BIN_EXE_cevian"))
        .args(["search", "--samples", "500", "--report", p.to_str().unwrap()])
        .env("CEVIAN_SEED", "123")
        .status()
        .unwrap();
    assert!(status.success());
    let m = read_manifest(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(m.seed, Some(123));
    assert!(matches!(m.config, RunConfig::Search(ref c) if c.seed == 123));
    assert!(!m.input.iter().any(|a| a == "--report"));
}

#[test]
fn table_csv_contract() {
    let out = cevian(&["table", "--density", "6"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,y,F"));
    let rows: Vec<(f64, f64, f64)> = lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
            (v[0], v[1], v[2])
        })
        .collect();
    assert_eq!(rows.last(), Some(&(1.0, 1.0, 0.0)));
    let (_, _, f) = rows.iter().find(|r| r.0 == 0.6 && r.1 == 0.8).unwrap();
    assert!((f - 0.159_300_522_905_909_9).abs() < 1e-12, "{f}");
    for (x, y, f) in &rows {
        assert!(*f >= 0.0 && (f - inequality::normalized_slack_xy(*x, *y).unwrap()).abs() < 1e-15);
    }
    assert_eq!(code(&["table", "--density", "1"]), 2);
}

#[test]
fn table_writes_csv_file_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let rep = dir.path().join("t.json");
    let out = cevian(&["table", "--density", "4", "--output", csv.to_str().unwrap(), "--report", rep.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("x,y,F\n"));
    let m = read_manifest(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(m.subcommand, "table");
}

#[test]
fn replay_reproduces_and_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    assert_eq!(code(&["certify", "--target", "scalene-lemma", "--report", p.to_str().unwrap()]), 0);
    let again = dir.path().join("c2.json");
    let out = cevian(&["replay", p.to_str().unwrap(), "--report", again.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        canonical_report(&std::fs::read_to_string(&p).unwrap()).unwrap(),
        canonical_report(&std::fs::read_to_string(&again).unwrap()).unwrap()
    );

    let text = std::fs::read_to_string(&p).unwrap().replacen("\"proven_count\": ", "\"proven_count\": 1", 1);
    std::fs::write(&p, text).unwrap();
    assert_eq!(code(&["replay", p.to_str().unwrap()]), 1);
    assert_eq!(code(&["replay", dir.path().join("missing.json").to_str().unwrap()]), 2);
}
