use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dkz-stokes")).args(args).output().expect("binary runs")
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn check_ybe_at_kappa_one_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ybe.json");
    let o = run(&["check-ybe", "--m", "2", "--u", "[[0,1],[0,-1]]", "--kappa", "[1,0]", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    assert_eq!(r["pass"], true);
    assert!(r["residuals"]["ybe_r"].as_f64().unwrap() <= 1e-8);
    assert!(r["residuals"]["ybe_perturbed"].as_f64().unwrap() > 1e-4);
    assert_eq!(r["inputs"]["kappa"][0].as_f64(), Some(1.0));
}

#[test]
fn duplicate_u_is_a_validation_error() {
    let o = run(&["compute-stokes", "--u", "[[0,1],[0,1]]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("distinct diagonal elements"));
}

#[test]
fn real_u_needs_permissive() {
    let o = run(&["check-ybe", "--u", "[[1,0],[-1,0]]", "--kappa", "[3,0]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("purely imaginary"));
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["pass"], true);
}

#[test]
fn step_budget_exhaustion_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"command": "compute-stokes", "tolerances": {"max_steps": 5}}"#).unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["compute-stokes", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    assert_eq!(r["error"]["numerical"], true);
    assert_eq!(r["inputs"]["tolerances"]["max_steps"], 5);
}

#[test]
fn config_for_another_command_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"command": "check-braid"}"#).unwrap();
    assert_eq!(run(&["check-ybe", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&cfg, r#"{"kapa": [1, 0]}"#).unwrap();
    assert_eq!(run(&["check-ybe", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_and_embed_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"u": [[0, 1], [0, -0.5]], "kappa": [2.7, 0], "seed": 9, "gauge": "diagonal"}"#).unwrap();
    let out = dir.path().join("q.json");
    let args = ["compare-qgroup", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    assert_eq!(run(&args).status.code(), Some(0));
    let first = std::fs::read(&out).unwrap();
    assert_eq!(run(&args).status.code(), Some(0));
    assert_eq!(first, std::fs::read(&out).unwrap());
    let r = report(&out);
    assert_eq!(r["inputs"]["seed"], 9);
    assert_eq!(r["inputs"]["gauge"], "diagonal");
    assert_eq!(r["outputs"]["variants"].as_array().unwrap().len(), 8);
    assert!(r["outputs"]["best"]["variant"].is_string());
    // no temporary files left behind
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn seventeen_significant_digits() {
    let o = run(&["check-ybe"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("3.0000000000000000e+0"), "{text}");
}
