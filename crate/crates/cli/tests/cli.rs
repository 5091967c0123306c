use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("abforge-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn abforge(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abforge"))
        .args(args)
        .current_dir(dir)
        .env_remove("ABFORGE_SEED")
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = abforge(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn check_reports_verdicts() {
    let d = workdir("check");
    ok(&d, &["fixture", "processor", "toppler-3", "-o", "t3.json"]);
    assert!(ok(&d, &["check", "t3.json"]).contains("recurrent, exponent 3"));

    ok(&d, &["fixture", "processor", "noncommuting", "-o", "nc.json"]);
    let out = abforge(&d, &["check", "nc.json"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("do not commute"));

    ok(&d, &["fixture", "function", "pair", "-o", "f6.json"]);
    assert!(ok(&d, &["check", "f6.json"]).contains("ZILP, k=2"));
    let v: Value = serde_json::from_str(&ok(&d, &["check", "f6.json", "--json"])).unwrap();
    assert_eq!(v["periods"], serde_json::json!([4, 5]));

    std::fs::write(d.join("broken.json"), "{\n  \"table\": [0,\n}").unwrap();
    let out = abforge(&d, &["check", "broken.json"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn compile_run_verify_round() {
    let d = workdir("three-quarters");
    ok(&d, &["fixture", "function", "three-quarters", "-o", "f5.json"]);
    ok(&d, &["compile", "f5.json", "--mode", "recurrent", "-o", "n5.json", "--report", "r.json"]);
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    assert_eq!(rep["counts"]["toppler"], 3);
    assert_eq!(rep["counts"]["delayer"], 0);

    assert!(ok(&d, &["run", "n5.json", "--input", "10"]).starts_with("output [9]"));
    assert!(ok(&d, &["run", "n5.json", "--input", "0"]).starts_with("output [0]"));
    let v: Value = serde_json::from_str(&ok(&d, &["verify", "f5.json", "n5.json", "--bounds", "12", "--json"])).unwrap();
    assert_eq!((v["passed"].as_bool(), v["grid_points"].as_u64()), (Some(true), Some(13)));
    assert_eq!(v["schedules"], 100);
    assert!(ok(&d, &["verify", "f5.json", "n5.json"]).starts_with("PASS"));

    ok(&d, &["fixture", "network", "three-quarters-misprimed", "-o", "bad.json"]);
    let out = abforge(&d, &["verify", "f5.json", "bad.json"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("at x=[1]"));
}

#[test]
fn compile_modes_and_rewrites() {
    let d = workdir("modes");
    ok(&d, &["fixture", "function", "presink", "-o", "p.json"]);
    ok(&d, &["compile", "p.json", "--mode", "bounded", "-o", "pn.json"]);
    let net: Value = serde_json::from_str(&std::fs::read_to_string(d.join("pn.json")).unwrap()).unwrap();
    assert_eq!(net["nodes"].as_array().unwrap().len(), 1);
    let out = abforge(&d, &["compile", "p.json", "--mode", "recurrent", "-o", "x.json"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("use general"));

    ok(&d, &["fixture", "function", "pair", "-o", "f6.json"]);
    let summary = ok(&d, &["compile", "f6.json", "--rewrite", "feedback", "-o", "n6.json"]);
    assert!(summary.contains("cyclic") && summary.contains("feedback_ok"), "{summary}");
    assert!(ok(&d, &["verify", "f6.json", "n6.json", "--bounds", "13,15", "--schedules", "20"]).starts_with("PASS"));

    ok(&d, &["fixture", "function", "transient-mix", "-o", "t.json"]);
    ok(&d, &["compile", "t.json", "--rewrite", "unprime", "-o", "tn.json"]);
    assert!(ok(&d, &["verify", "t.json", "tn.json"]).starts_with("PASS"));
}

#[test]
fn run_options_and_exit_codes() {
    let d = workdir("run");
    ok(&d, &["fixture", "network", "delayer-loop", "-o", "dl.json"]);
    assert!(ok(&d, &["run", "dl.json", "--input", "5"]).starts_with("output [4]"));
    let v: Value = serde_json::from_str(&ok(&d, &["run", "dl.json", "--input", "5", "--schedule", "random", "--seed", "9", "--trace", "--json"])).unwrap();
    assert_eq!(v["output"], serde_json::json!([4]));
    assert_eq!(v["trace"].as_array().unwrap().len() as u64, v["steps"].as_u64().unwrap());

    assert_eq!(code(&abforge(&d, &["run", "dl.json", "--input", "50", "--budget", "3"])), 3);
    assert_eq!(code(&abforge(&d, &["run", "dl.json", "--input", "1,2"])), 2);
    assert_eq!(code(&abforge(&d, &["run", "dl.json", "--input", "x"])), 2);
    assert_eq!(code(&abforge(&d, &["run", "missing.json", "--input", "1"])), 2);
    assert_eq!(code(&abforge(&d, &["frobnicate"])), 2);
}

#[test]
fn seed_comes_from_the_environment() {
    let d = workdir("seed");
    ok(&d, &["fixture", "function", "three-quarters", "-o", "f.json"]);
    ok(&d, &["fixture", "network", "three-quarters-net", "-o", "n.json"]);
    let out = Command::new(env!("CARGO_BIN_EXE_abforge"))
        .args(["verify", "f.json", "n.json", "--json"])
        .current_dir(&d)
        .env("ABFORGE_SEED", "1234")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 1234);
    let again = abforge(&d, &["verify", "f.json", "n.json", "--json", "--seed", "1234"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn export_formats() {
    let d = workdir("export");
    ok(&d, &["fixture", "network", "toppler-3-1", "-o", "t.json"]);
    let dot = ok(&d, &["export", "t.json"]);
    assert_eq!(dot.matches("shape=box").count(), 1);
    ok(&d, &["fixture", "network", "rotor-3", "-o", "r.json"]);
    let dot = ok(&d, &["export", "r.json", "--format", "dot"]);
    assert_eq!(dot.lines().filter(|l| l.trim_start().starts_with('n') && l.contains("shape=")).count(), 5);

    let once = ok(&d, &["export", "r.json", "--format", "json"]);
    std::fs::write(d.join("r2.json"), &once).unwrap();
    assert_eq!(ok(&d, &["export", "r2.json", "--format", "json"]), once);
}

#[test]
fn fixture_listing() {
    let d = workdir("list");
    let names = ok(&d, &["fixture", "network"]);
    assert!(names.lines().count() >= 20);
    assert_eq!(code(&abforge(&d, &["fixture", "function", "nope"])), 2);
}
