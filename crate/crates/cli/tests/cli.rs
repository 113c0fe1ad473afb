use std::path::Path;
use std::process::{Command, Output};
use std::sync::OnceLock;

use choreo_cli::{EXIT_INPUT, EXIT_OK, EXIT_PROOF_FAILED};
use tempfile::TempDir;

const SMALL: [&str; 6] = ["--K", "10", "--N", "6", "--nu", "11/10"];

fn choreo(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_choreo"));
    cmd.current_dir(dir).args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

/// A directory holding a coarse solved branch, shared by the tests.
fn solved() -> &'static Path {
    static DIR: OnceLock<TempDir> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let o = choreo(dir.path(), &[&SMALL[..], &["solve"]].concat(), &[]);
        assert_eq!(code(&o), EXIT_OK, "{}", String::from_utf8_lossy(&o.stderr));
        dir
    })
    .path()
}

#[test]
fn solve_writes_branch_and_inverse() {
    let d = solved();
    assert!(d.join("branch.json").is_file());
    assert!(d.join("branch.inverse.json").is_file());
}

#[test]
fn coarse_proof_fails_with_certificate() {
    let d = solved();
    let cert = d.join("coarse-cert.json");
    let o = choreo(d, &[&SMALL[..], &["--cert", cert.to_str().unwrap(), "prove"]].concat(), &[]);
    assert_eq!(code(&o), EXIT_PROOF_FAILED);
    assert!(String::from_utf8_lossy(&o.stdout).contains("NOT PROVED"));
    assert!(cert.is_file());
}

#[test]
fn sample_exports_orbits() {
    let d = solved();
    let out = d.join("orbits-test");
    let args = ["--out", out.to_str().unwrap(), "sample", "--omega", "1,0.5,0", "--samples", "16"];
    let o = choreo(d, &args, &[]);
    assert_eq!(code(&o), EXIT_OK, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("manifest.json").is_file());
    let csv = std::fs::read_to_string(out.join("orbit_000_inertial.csv")).unwrap();
    assert_eq!(csv.lines().count(), 17);
}

#[test]
fn oracle_reports_coarse_branch() {
    let d = solved();
    let o = choreo(d, &["oracle", "--omega", "0.5", "--max-dev", "1e-14"], &[]);
    assert_eq!(code(&o), EXIT_PROOF_FAILED);
    assert!(String::from_utf8_lossy(&o.stdout).contains("deviation"));
}

#[test]
fn invalid_inputs_exit_with_input_code() {
    let d = solved();
    let cases: [(&[&str], &[(&str, &str)]); 4] = [
        (&["sample", "--omega", "1.5"], &[]),
        (&["--nu", "9/10", "solve"], &[]),
        (&["solve"], &[("CHOREO_K", "abc")]),
        (&["--branch", "missing.json", "prove"], &[]),
    ];
    for (args, env) in cases {
        let o = choreo(d, args, env);
        assert_eq!(code(&o), EXIT_INPUT, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn malformed_files_are_input_errors() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("branch.json"), "{ not json").unwrap();
    std::fs::write(d.path().join("bad.toml"), "K = 10\nbogus = 1\n").unwrap();
    assert_eq!(code(&choreo(d.path(), &["prove"], &[])), EXIT_INPUT);
    assert_eq!(code(&choreo(d.path(), &["--config", "bad.toml", "solve"], &[])), EXIT_INPUT);
}

#[test]
fn config_file_is_layered_under_flags() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("run.toml"), "K = 8\nN = 4\nnu = \"11/10\"\nbranch = \"cfg.json\"\n").unwrap();
    let o = choreo(d.path(), &["--config", "run.toml", "--N", "5", "solve"], &[]);
    assert_eq!(code(&o), EXIT_OK, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(d.path().join("cfg.json")).unwrap();
    assert!(text.contains("\"K\": 8") || text.contains("\"K\":8"));
    assert!(text.contains("\"N\": 5") || text.contains("\"N\":5"));
}
