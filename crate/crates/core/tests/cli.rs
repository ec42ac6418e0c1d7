use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gausslink::sweep::{ConfigError, SweepError};

fn gausslink() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gausslink"));
    cmd.env_remove("GAUSSLINK_JOBS");
    cmd
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited normally")
}

const SMALL: &str = "\
[sweep]
experiment = fig2bc_capacity_maps
output = small.csv

[fixed]
zeta_o = 0.8

[axis.C_om]
min = 0.1
max = 10
points = 6
scale = log

[axis.C_em]
min = 0.1
max = 10
points = 5
scale = log
";

#[test]
fn sweep_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "small.ini", SMALL);
    let out = gausslink()
        .args(["sweep", config.to_str().unwrap(), "--out"])
        .arg(dir.path())
        .args(["--svg", "--jobs", "2"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("small.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "C_om,C_em,stable,u,v,w,kappa_opt,q_lb_eqt,q_lb_dqt");
    assert_eq!(lines.count(), 30);
    assert!(!csv.contains('\r'));
    let svg = fs::read_to_string(dir.path().join("small.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "small.ini", SMALL);
    let mut outputs = Vec::new();
    for (sub, jobs) in [("a", "1"), ("b", "3")] {
        let target = dir.path().join(sub);
        let out = gausslink()
            .args(["sweep", config.to_str().unwrap(), "--out"])
            .arg(&target)
            .env("GAUSSLINK_JOBS", jobs)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(fs::read(target.join("small.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn config_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_experiment = write_config(dir.path(), "bad.ini", "[sweep]\nexperiment = fig9\n");
    let bad_axis = write_config(
        dir.path(),
        "axis.ini",
        "[sweep]\nexperiment = custom\n[axis.C_om]\nmin = 2\nmax = 1\npoints = 3\n",
    );
    let missing = dir.path().join("absent.ini");
    for path in [&bad_experiment, &bad_axis, &missing] {
        let out = gausslink().args(["sweep", path.to_str().unwrap()]).output().unwrap();
        assert_eq!(code(&out), 2, "{}: {}", path.display(), String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn config_error_names_line_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "typo.ini", "[sweep]\nexperiment = custom\n\n[fixed]\nzeta_q = 0.5\n");
    let out = gausslink().args(["sweep", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 5"), "{stderr}");
    assert!(stderr.contains("zeta_q"), "{stderr}");
}

#[test]
fn bad_job_counts_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "small.ini", SMALL);
    let out = gausslink()
        .args(["sweep", config.to_str().unwrap()])
        .env("GAUSSLINK_JOBS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let out = gausslink()
        .args(["sweep", config.to_str().unwrap(), "--jobs", "0"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn selftest_passes() {
    let out = gausslink().args(["selftest", "--seed", "9"]).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(code(&out), 0, "{stdout}");
    assert!(stdout.lines().all(|l| l.starts_with("PASS")), "{stdout}");
}

#[test]
fn error_kinds_map_to_exit_codes() {
    let config = SweepError::Config(ConfigError {
        line: None,
        field: None,
        message: "x".into(),
    });
    assert_eq!(config.exit_code(), 2);
    assert_eq!(SweepError::Numerical("x".into()).exit_code(), 3);
}
