use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn tweezer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tweezer")).args(args).output().unwrap()
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn json_line(bytes: &[u8]) -> serde_json::Value {
    let text = String::from_utf8_lossy(bytes);
    serde_json::from_str(text.lines().last().expect("one line")).unwrap()
}

fn out_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_declared_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rate");
    let o = tweezer(&["rate", "--seed", "4", "--out", out_arg(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let line = json_line(&o.stdout);
    assert_eq!(line["status"], "ok");
    for f in line["files"].as_array().unwrap() {
        assert!(Path::new(f.as_str().unwrap()).exists());
    }
    assert!(out.join("summary.json").exists());
}

#[test]
fn same_seed_gives_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("rabi.toml");
    let mut csv = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(k.to_string());
        let o = tweezer(&["run", "--config", cfg.to_str().unwrap(), "--out", out_arg(&out), "--trials", "50"]);
        assert!(o.status.success());
        csv.push(std::fs::read(out.join("rabi.csv")).unwrap());
    }
    assert_eq!(csv[0], csv[1]);
}

#[test]
fn unknown_key_is_a_machine_readable_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = tweezer(&["g2", "--out", out_arg(dir.path()), "--set", "emitter.no_such_key=1"]);
    assert_eq!(o.status.code(), Some(2));
    let line = json_line(&o.stderr);
    assert_eq!(line["status"], "error");
    assert!(line["kind"].is_string());
    assert!(line["message"].as_str().unwrap().contains("no_such_key"));
}

#[test]
fn invalid_parameters_fail_validation() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "experiment = \"g2\"\nemitter.pulse_duration_ns = -4\n").unwrap();
    let o = tweezer(&["validate", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let line = json_line(&o.stdout);
    assert!(!line["violations"].as_array().unwrap().is_empty());

    let good = configs().join("g2.toml");
    let o = tweezer(&["validate", "--config", good.to_str().unwrap()]);
    assert!(o.status.success());
}

#[test]
fn mismatched_subcommand_and_config_is_rejected() {
    let cfg = configs().join("rabi.toml");
    let o = tweezer(&["g2", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_line(&o.stderr)["status"], "error");
}

#[test]
fn selftest_reports_every_check() {
    let o = tweezer(&["selftest"]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.lines().count() >= 10);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["passed"], true, "{line}");
    }
}
