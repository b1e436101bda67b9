use std::process::Command;

use serde_json::Value;

fn equilog() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_equilog"));
    c.env_remove("EQUILOG_CACHE");
    c
}

#[test]
fn characters_writes_a_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = equilog()
        .args(["characters", "--ring", "D", "--max-n", "5", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(cert["pipeline"], "characters");
    assert!(cert["environment"]["wall_time_ms"].is_u64());
    let totals: Vec<u64> = cert["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["name"] == "graded_character")
        .map(|c| c["detail"]["dimensions"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).sum())
        .collect();
    assert_eq!(totals, vec![1, 1, 2, 6, 24]);
}

#[test]
fn failing_pipeline_exits_nonzero() {
    let out = equilog().args(["verify-elc", "--ring", "T", "--max-m", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(equilog().args(["characters", "--ring", "Q", "--max-n", "3"]).status().unwrap().code(), Some(2));
    assert_eq!(equilog().args(["deform", "--min-n", "1"]).status().unwrap().code(), Some(2));
}

#[test]
fn cache_dir_is_filled_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        equilog()
            .args(["--json", "verify-mpy", "--max-degree", "1", "--cache-dir"])
            .arg(dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    assert!(dir.path().join("manifest.json").exists());
    assert!(dir.path().join("pattern_D_1.json").exists());
    let second = run();
    let a: Value = serde_json::from_slice(&first.stdout).unwrap();
    let b: Value = serde_json::from_slice(&second.stdout).unwrap();
    assert_eq!(a["checks"], b["checks"]);
}

#[test]
fn env_var_names_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let status = equilog()
        .env("EQUILOG_CACHE", dir.path())
        .args(["characters", "--ring", "B", "--max-n", "4"])
        .status()
        .unwrap();
    assert!(status.success());
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 1);
}

#[test]
fn multimodular_matches_rational() {
    let run = |arith: &str| {
        let out = equilog()
            .args(["--json", "--arith", arith, "consistency", "--max-n", "4", "--max-degree", "2"])
            .output()
            .unwrap();
        assert!(out.status.success());
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v["checks"].clone()
    };
    assert_eq!(run("rational"), run("multimodular"));
}

#[test]
fn fit_battery_runs() {
    let out = equilog().args(["--jobs", "1", "fit", "--max-degree", "1"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("recursion_MOT"));
}
