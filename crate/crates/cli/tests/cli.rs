//! End-to-end tests of the `hwlab` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn hwlab(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hwlab"))
        .args(args)
        .env("HWLAB_OUT", out)
        .output()
        .expect("binary runs")
}

fn run_dirs(out: &Path, prefix: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(out)
        .map(|rd| rd.filter_map(|e| e.ok()).map(|e| e.path()).collect())
        .unwrap_or_default();
    v.retain(|p| p.file_name().unwrap().to_string_lossy().starts_with(prefix));
    v.sort();
    v
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn resonant_szego_reports_slope_and_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let args = [
        "szego", "--mode", "resonant", "--K", "1", "--M", "2", "--X0", "0", "--nu0", "0.5", "--t-end", "20",
    ];
    let a = hwlab(tmp.path(), &args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert!(String::from_utf8_lossy(&a.stdout).contains("X nu slope -2.0000000000"));
    let b = hwlab(tmp.path(), &args);
    assert_eq!(b.status.code(), Some(0));
    let dirs = run_dirs(tmp.path(), "szego-");
    assert_eq!(dirs.len(), 2);
    let read = |d: &PathBuf| std::fs::read(d.join("trajectory.csv")).unwrap();
    assert_eq!(read(&dirs[0]), read(&dirs[1]));
    let m = manifest(&dirs[0]);
    assert_eq!(m["config"]["mode"], "resonant");
    assert_eq!(m["exit_code"], 0);
    assert_eq!(m["summary"]["pass"], true);
    let hash = m["config_hash"].as_str().unwrap();
    assert!(dirs[0].file_name().unwrap().to_string_lossy().contains(hash));
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(&cfg, "# resonant run\nmode = resonant\nt_end = 5\nsamples = 11\n").unwrap();
    let out = tmp.path().join("out");
    let o = hwlab(&out, &["szego", "--config", cfg.to_str().unwrap(), "--t-end", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(&run_dirs(&out, "szego-")[0]);
    assert_eq!(m["config"]["t_end"], "3");
    assert_eq!(m["config"]["samples"], "11");
    let csv = std::fs::read_to_string(run_dirs(&out, "szego-")[0].join("trajectory.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12);
    assert!(csv.starts_with("t,X,nu,Gamma,Gamma_dot,X_times_nu,kappa1,kappa2\n"));
}

#[test]
fn invalid_input_exits_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = hwlab(&out, &["evolve", "--n", "1024", "--length", "10", "--dt", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let cfg = tmp.path().join("bad.cfg");
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    let o = hwlab(&out, &["oracle", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let o = hwlab(&out, &["modulation", "--eta", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
    let o = hwlab(&out, &["no-such-command"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(run_dirs(&out, "").is_empty());
}

#[test]
fn forced_parameters_are_accepted() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hwlab(
        tmp.path(),
        &[
            "evolve", "--n", "256", "--length", "10", "--dt", "0.05", "--t-end", "0.1", "--force",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn oracle_passes_on_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hwlab(tmp.path(), &["oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).contains("6/6 identities"));
    let dir = &run_dirs(tmp.path(), "oracle-")[0];
    let table = std::fs::read_to_string(dir.join("oracle.csv")).unwrap();
    assert_eq!(table.lines().count(), 7);
}

#[test]
fn check_exit_code_reflects_outcome() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hwlab(tmp.path(), &["check", "--only", "6,10"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let dir = &run_dirs(tmp.path(), "check-")[0];
    let table = std::fs::read_to_string(dir.join("acceptance.csv")).unwrap();
    assert!(table.starts_with("id,name,pass,measured,detail,seconds\n"));
    assert_eq!(table.lines().count(), 3);
    let o = hwlab(tmp.path(), &["check", "--only", "13"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn evolve_resumes_from_checkpoint() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hwlab(
        tmp.path(),
        &[
            "evolve",
            "--equation",
            "szego",
            "--n",
            "1024",
            "--length",
            "50",
            "--t-end",
            "0.1",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let first = run_dirs(tmp.path(), "evolve-")[0].clone();
    let stem = first.join("final");
    let o = hwlab(
        tmp.path(),
        &[
            "evolve",
            "--equation",
            "szego",
            "--init",
            "file",
            "--file",
            stem.to_str().unwrap(),
            "--t-end",
            "0.2",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let dirs = run_dirs(tmp.path(), "evolve-");
    let second = dirs.iter().find(|d| **d != first).unwrap();
    let m = manifest(second);
    assert_eq!(m["config"]["t_start"], "0.1");
    assert_eq!(m["config"]["n"], "1024");
    let diag = std::fs::read_to_string(second.join("diagnostics.csv")).unwrap();
    assert!(diag.lines().nth(1).unwrap().starts_with("1.0"));
}
