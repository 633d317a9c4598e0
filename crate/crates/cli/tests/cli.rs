use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qec5_cli::{FileConfig, RunManifest};

fn qec5(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qec5"))
        .args(args)
        .output()
        .expect("spawn qec5")
}

fn write_config(dir: &Path, json: &str) -> String {
    let path = dir.join("cfg.json");
    fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

fn columns(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn zero_noise_run_gives_constant_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"enable_dephasing": false, "enable_relaxation": false, "dt_w0": 0.5, "total_time_w0": 5}"#,
    );
    let out = qec5(&["run", "--config", &cfg]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("time_w0,fidelity_corrected,fidelity_uncorrected\n"));
    let rows = columns(&text);
    assert_eq!(rows.len(), 11);
    for row in rows {
        for v in &row[1..] {
            assert!((v.parse::<f64>().unwrap() - 1.0).abs() < 1e-11, "{v}");
        }
    }
}

#[test]
fn manifest_reruns_to_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"temperature_mK": 5, "dephasing_rate_per_w0": 0.01, "dt_w0": 0.5, "total_time_w0": 3, "baseline": false}"#,
    );
    let first = dir.path().join("a.csv");
    assert!(qec5(&["run", "--config", &cfg, "--out", first.to_str().unwrap()])
        .status
        .success());

    let manifest = RunManifest::from_json(&fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    assert_eq!(manifest.resolved.n_rounds, 6);
    let replay = dir.path().join("replay.json");
    fs::write(&replay, manifest.config.to_json()).unwrap();
    let second = dir.path().join("b.csv");
    let out = qec5(&[
        "run",
        "--config",
        replay.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());

    let text = fs::read_to_string(&first).unwrap();
    assert!(columns(&text).iter().all(|r| r.len() == 3 && r[2].is_empty()));
    assert_eq!(
        FileConfig::from_json(&manifest.config.to_json()).unwrap(),
        manifest.config
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), r#"{"total_time_w0": -1}"#);
    let out = qec5(&["run", "--config", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("total_time_w0"));

    let unknown = write_config(dir.path(), r#"{"temprature_mK": 5}"#);
    let out = qec5(&["run", "--config", &unknown]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("temprature_mK"));

    assert_eq!(
        qec5(&["run", "--config", "/nonexistent/cfg.json"]).status.code(),
        Some(1)
    );
    assert_eq!(qec5(&["preset", "fig9"]).status.code(), Some(1));
    assert_eq!(qec5(&["--frobnicate"]).status.code(), Some(1));
    assert_eq!(qec5(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_on_relaxation_scenario_is_monotone() {
    let out = qec5(&["sweep", "--preset", "fig5", "--dt", "1,0.5,0.25"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("dt_w0,fidelity_final_corrected\n"));
    let finals: Vec<f64> = columns(&text).iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(finals.len(), 3);
    assert!(finals.windows(2).all(|w| w[1] >= w[0]), "{finals:?}");
}

#[test]
fn preset_with_short_horizon_writes_trace_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = qec5(&[
        "preset",
        "fig6",
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--total-time",
        "0.05",
        "--record-every",
        "10",
        "--validate",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("fig6.csv")).unwrap();
    assert_eq!(columns(&csv).len(), 6);
    let manifest = RunManifest::from_json(&fs::read_to_string(dir.path().join("fig6.json")).unwrap()).unwrap();
    assert_eq!(manifest.command, "preset fig6");
    assert_eq!(manifest.config.dt_w0, 0.001);
    assert_eq!(manifest.config.total_time_w0, 0.05);
}

#[test]
fn validate_checks_pass() {
    let out = qec5(&["validate", "--skip-presets"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("ok ")));
    assert!(text.contains("structured vs dense round"));
}
