use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn hopnet(dir: &Path, args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hopnet"));
    cmd.current_dir(dir).args(args);
    match threads {
        Some(t) => cmd.env("HOPNET_THREADS", t),
        None => cmd.env_remove("HOPNET_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn run_dir(out: &Output) -> PathBuf {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    PathBuf::from(v["run_dir"].as_str().unwrap())
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_slice(&read(dir, "manifest.json")).unwrap()
}

#[test]
fn identical_configs_give_identical_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["conductivity", "--ell", "6", "--replicas", "3", "--pad", "6", "--seed", "5"];
    let a = tmp.path().join(run_dir(&hopnet(tmp.path(), &args, None)));
    let b = tmp.path().join(run_dir(&hopnet(tmp.path(), &args, None)));
    assert_ne!(a, b);
    assert_eq!(read(&a, "replicas.csv"), read(&b, "replicas.csv"));
    assert_eq!(manifest(&a)["config_hash"], manifest(&b)["config_hash"]);
}

#[test]
fn thread_count_does_not_change_results() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["percolate", "--L", "8", "--zeta", "3.8", "--beta", "4", "--replicas", "60", "--compare-rescaled"];
    let a = tmp.path().join(run_dir(&hopnet(tmp.path(), &args, Some("1"))));
    let b = tmp.path().join(run_dir(&hopnet(tmp.path(), &args, Some("3"))));
    assert_eq!(read(&a, "crossing.json"), read(&b, "crossing.json"));
}

#[test]
fn replay_reproduces_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join(run_dir(&hopnet(tmp.path(), &["sample", "--half", "3", "--sign", "positive", "--alpha", "1"], None)));
    let m = manifest(&first);
    assert_eq!(m["config"]["law"]["kind"], "positive_power");
    assert_eq!(m["config"]["law"]["alpha"], 1.0);
    let path = first.join("manifest.json");
    let second = tmp.path().join(run_dir(&hopnet(tmp.path(), &["replay", path.to_str().unwrap()], None)));
    for name in ["points.csv", "configuration.json"] {
        assert_eq!(read(&first, name), read(&second, name));
    }
    assert_eq!(m["outputs"], manifest(&second)["outputs"]);
}

#[test]
fn flags_override_config_keys() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"schema_version": 1, "command": "fkg-demo", "samples": 20000, "seed": 3}"#).unwrap();
    let dir = tmp.path().join(run_dir(&hopnet(tmp.path(), &["fkg-demo", "--config", "cfg.json", "--samples", "30000"], None)));
    let m = manifest(&dir);
    assert_eq!(m["config"]["samples"], 30000);
    assert_eq!(m["config"]["seed"], 3);
    let fkg: Value = serde_json::from_slice(&read(&dir, "fkg.json")).unwrap();
    assert_eq!(fkg["hits_ab"], 0);
    assert_eq!(fkg["samples"], 30000);
}

#[test]
fn exact_run_directory_and_outputs_listing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = hopnet(tmp.path(), &["graph", "--kind", "boolean", "--radius", "0.4", "--half", "3", "--run-dir", "here"], None);
    let dir = tmp.path().join(run_dir(&out));
    assert_eq!(dir, tmp.path().join("here"));
    let m = manifest(&dir);
    let files: Vec<&str> = m["outputs"].as_array().unwrap().iter().map(|o| o["file"].as_str().unwrap()).collect();
    assert_eq!(files, ["edges.csv", "graph.json"]);
}

#[test]
fn config_errors_exit_with_two_and_a_pointer() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.json");
    std::fs::write(&cfg, r#"{"schema_version": 1, "rho": -1}"#).unwrap();
    let out = hopnet(tmp.path(), &["walk", "--config", "bad.json"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/rho"));

    std::fs::write(&cfg, r#"{"schema_version": 7}"#).unwrap();
    let out = hopnet(tmp.path(), &["walk", "--config", "bad.json"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/schema_version"));

    std::fs::write(&cfg, r#"{"command": "walk", "trajectories": 50}"#).unwrap();
    let out = hopnet(tmp.path(), &["fkg-demo", "--config", "bad.json"], None);
    assert_eq!(out.status.code(), Some(2));

    std::fs::write(&cfg, r#"{"L": [8, "wide"]}"#).unwrap();
    let out = hopnet(tmp.path(), &["crossings", "--config", "bad.json"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/L/1"));

    let out = hopnet(tmp.path(), &["fkg-demo"], Some("many"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_with_three() {
    let tmp = tempfile::tempdir().unwrap();
    let out = hopnet(tmp.path(), &["graph", "--kind", "ma", "--ell", "2", "--rho", "0.00001"], None);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn small_mott_scan_writes_scan_and_slope() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["mott-scan", "--beta", "2,4", "--alpha", "0", "--rho", "1", "--lambda-star", "14", "--replicas", "2", "--l-factor", "3"];
    let dir = tmp.path().join(run_dir(&hopnet(tmp.path(), &args, None)));
    let scan = String::from_utf8(read(&dir, "scan.csv")).unwrap();
    assert_eq!(scan.lines().count(), 3);
    let slope: Value = serde_json::from_slice(&read(&dir, "slope.json")).unwrap();
    assert!(slope["slope"].as_f64().unwrap() < 0.0);
    assert!((slope["reference_slope"].as_f64().unwrap() + 14f64.powf(1.0 / 3.0)).abs() < 1e-9);
}
