//! End-to-end tests of the compiled binary: exit codes, JSON shape, and the
//! cache directory behavior.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_symderiv"))
}

#[test]
fn dims_exits_zero_and_emits_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["dims", "--genus", "2", "--max-degree", "2"])
        .arg("--cache-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "dims");
    assert_eq!(v["checks"][0]["computed"], 24);
    assert_eq!(v["checks"][0]["status"], "pass");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = bin().args(["dims", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_selector_is_a_usage_error() {
    let out = bin().args(["dims", "--max-degree", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn expensive_weight_needs_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["abelianize", "--sympl", "2", "--weight", "3"])
        .arg("--cache-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn polygon_range_runs_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["polygon", "--k", "2..5", "--disconnected"])
        .arg("--cache-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"polygon-k5-nonzero"));
    assert!(names.contains(&"disconnected-3-3"));
}

#[test]
fn cache_dir_env_var_is_honored_and_reports_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        let out = bin()
            .args(["abelianize", "--sympl", "3", "--weight", "2"])
            .env("SYMDERIV_CACHE", dir.path())
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        serde_json::from_slice::<serde_json::Value>(&out.stdout).unwrap()
    };
    let mut first = run();
    assert!(dir.path().read_dir().unwrap().next().is_some(), "cache written");
    let mut second = run();
    assert_eq!(second["cache"]["hits"], serde_json::json!(2));
    // Identical up to elapsed times and cache counters.
    for v in [&mut first, &mut second] {
        v["cache"] = serde_json::Value::Null;
        for c in v["checks"].as_array_mut().unwrap() {
            c["ms"] = serde_json::json!(0);
        }
    }
    assert_eq!(first, second);
}

#[test]
fn json_out_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = bin()
        .args(["dims", "--plain", "2", "--max-degree", "3"])
        .arg("--cache-dir")
        .arg(dir.path())
        .arg("--json-out")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let dims: Vec<i64> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["computed"].as_i64().unwrap())
        .collect();
    assert_eq!(dims, vec![8, 16, 32]);
}
