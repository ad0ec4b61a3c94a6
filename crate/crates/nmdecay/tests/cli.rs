//! Black-box checks of the command line front end: output formats, byte
//! reproducibility, manifest replay, config precedence, and exit codes.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nmdecay"))
}

fn work_dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir()
        .join(format!("nmdecay_cli_{}", std::process::id()))
        .join(name);
    fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn nmdecay")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn survival_csv_is_deterministic() {
    let a = work_dir("det_a");
    let b = work_dir("det_b");
    for d in [&a, &b] {
        let out = run(&[
            "sp", "--case", "I", "--v0", "0.1", "--v", "1", "--t-max", "5", "--dt", "0.1",
            "--n-env", "20", "--out", d.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr_of(&out));
    }
    let csv_a = fs::read(a.join("sp_I.csv")).unwrap();
    let csv_b = fs::read(b.join("sp_I.csv")).unwrap();
    assert_eq!(csv_a, csv_b, "reruns must be byte-identical");
    assert_eq!(
        fs::read(a.join("sp_I.manifest.json")).unwrap(),
        fs::read(b.join("sp_I.manifest.json")).unwrap()
    );
    let text = String::from_utf8(csv_a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# case=I v0=0.1 v=1 kind=SP"));
    assert_eq!(lines.next(), Some("t,p"));
    assert_eq!(
        lines.next(),
        Some("0.00000000000000e0,1.00000000000000e0"),
        "first sample must be P(0) = 1"
    );
    assert_eq!(text.lines().count(), 2 + 51);
}

#[test]
fn manifest_replays_to_identical_output() {
    let a = work_dir("replay_a");
    let b = work_dir("replay_b");
    let out = run(&[
        "le", "--case", "VI", "--v0", "0.1", "--v", "1", "--t-max", "5", "--dt", "0.1",
        "--n-env", "30", "--out", a.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));

    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(a.join("le_VI.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "le");
    assert_eq!(manifest["outputs"][0], "le_VI.csv");
    let config = manifest["config"].as_object().unwrap();
    let mut text = String::new();
    for (key, value) in config {
        let value = match value.as_str() {
            Some(s) => s.to_string(),
            None => value.to_string(),
        };
        text.push_str(&format!("{key} = {value}\n"));
    }
    let cfg_path = b.join("replay.cfg");
    fs::write(&cfg_path, text).unwrap();

    let out = run(&[
        "le", "--config", cfg_path.to_str().unwrap(), "--out", b.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert_eq!(
        fs::read(a.join("le_VI.csv")).unwrap(),
        fs::read(b.join("le_VI.csv")).unwrap(),
        "a replayed manifest must reproduce the run byte for byte"
    );
}

#[test]
fn pole_report_splits_directions() {
    let d = work_dir("poles");
    let out = run(&[
        "poles", "--case", "VI", "--v0", "0.1", "--v", "1", "--out", d.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let poles: serde_json::Value =
        serde_json::from_slice(&fs::read(d.join("poles_VI.json")).unwrap()).unwrap();
    let arr = poles.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    assert_eq!(arr[0]["direction"], "forward");
    assert_eq!(arr[1]["direction"], "backward");
    let ratio = arr[0]["rate"].as_f64().unwrap() / arr[1]["rate"].as_f64().unwrap();
    // sqrt(3) against 1/sqrt(3), up to the finite-coupling pole shift.
    assert!((ratio - 3.0).abs() < 0.05, "rate ratio {ratio}");
}

#[test]
fn flag_beats_config_file() {
    let d = work_dir("precedence");
    let cfg_path = d.join("run.cfg");
    fs::write(&cfg_path, "case = I\nt_max = 5\ndt = 0.1\nn_env = 40\n").unwrap();
    let out = run(&[
        "sp", "--config", cfg_path.to_str().unwrap(), "--t-max", "3", "--out",
        d.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(d.join("sp_I.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["t_max"], 3.0);
    assert_eq!(manifest["config"]["n_env"], 40);
    let csv = fs::read_to_string(d.join("sp_I.csv")).unwrap();
    let last = csv.lines().last().unwrap();
    assert!(last.starts_with("3.00000000000000e0,"), "last row: {last}");
}

#[test]
fn validation_failures_exit_one() {
    let d = work_dir("validation");
    let out_dir = d.to_str().unwrap();

    let unknown_case = run(&["sp", "--case", "Z", "--out", out_dir]);
    assert_eq!(unknown_case.status.code(), Some(1));
    assert!(stderr_of(&unknown_case).contains("unknown case"));

    let short_chain = run(&[
        "sp", "--case", "I", "--v0", "0.1", "--v", "1", "--n-env", "20", "--out", out_dir,
    ]);
    assert_eq!(short_chain.status.code(), Some(1));
    assert!(stderr_of(&short_chain).contains("n_env"));

    let cfg_path = d.join("bad.cfg");
    fs::write(&cfg_path, "banana = 1\n").unwrap();
    let bad_key = run(&[
        "sp", "--case", "I", "--config", cfg_path.to_str().unwrap(), "--out", out_dir,
    ]);
    assert_eq!(bad_key.status.code(), Some(1));
    assert!(stderr_of(&bad_key).contains("unknown key"));
}

#[test]
fn benchmark_table_passes_and_reports() {
    let d = work_dir("table");
    let out = run(&["table1", "--n-env", "600", "--out", d.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let rows: serde_json::Value =
        serde_json::from_slice(&fs::read(d.join("table1.json")).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r["pass"].as_bool().unwrap()));

    let horizon = run(&["table1", "--n-env", "100", "--out", d.to_str().unwrap()]);
    assert_eq!(horizon.status.code(), Some(1));

    // The echo correction grows with the square of the coupling, so the
    // same geometries run off the reference coupling must trip the
    // acceptance exit code.
    let detuned = run(&[
        "table1", "--v0", "0.15", "--n-env", "600", "--out", d.to_str().unwrap(),
    ]);
    assert_eq!(detuned.status.code(), Some(2));
}

#[test]
fn spin_check_exit_codes() {
    let d = work_dir("jwt");
    let ok = run(&["jwt-check", "--sites", "8", "--out", d.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr_of(&ok));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("max |P_spin"));

    // An impossible tolerance turns the same healthy run into a numerical
    // failure.
    let strict = run(&[
        "jwt-check", "--sites", "8", "--tol", "1e-30", "--out", d.to_str().unwrap(),
    ]);
    assert_eq!(strict.status.code(), Some(3));
}
