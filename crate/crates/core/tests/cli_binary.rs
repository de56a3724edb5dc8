//! The `chiral-tpsr` binary: exit codes, output files and determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chiral-tpsr"))
}

fn config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

#[test]
fn spectrum_zero_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "s.cfg", "field.E0_kV_cm = 0\nspectrum.M = 0\n");
    let out = run(&["spectrum", "--config", &cfg, "--preset", "propanediol-1,2", "--jmax", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for e in ["0.00000000000e0", "6.43106000000e3", "1.13630100000e4", "1.22121500000e4"] {
        assert!(text.contains(e), "{text}");
    }
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "s.cfg", "field.E0_kV_cm = 0\n");
    let out = run(&["spectrum", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("molecule.preset"));

    let out = run(&["spectrum", "--config", &cfg, "--preset", "benzene"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("propanediol-1,2"));

    let bad = config(dir.path(), "b.cfg", "drive.theta = 1\n");
    let out = run(&["dynamics", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn no_partial_output_on_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "a.cfg", "decay.kappa_MHz = 0\n");
    let target = dir.path().join("a.csv");
    let out = run(&["absorption", "--config", &cfg, "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("steady state requires dissipation"));
    assert!(!target.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn numerical_errors_exit_3() {
    // theta_f of (1,4,2) at zero field does not exist
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        "d.cfg",
        "molecule.preset = propanediol-1,2\ntriple.alpha = 1\ntriple.beta = 4\ntriple.gamma = 2\n\
         field.E0_kV_cm = 0\ndrive.theta_f = auto\n",
    );
    let out = run(&["dynamics", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        "t.cfg",
        "molecule.preset = propanediol-1,2\ntriple.alpha = 1\ntriple.beta = 1\ntriple.gamma = 4\n\
         field.E0_grid_kV_cm = 0:20:9\n",
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = run(&["theta-f", "--config", &cfg, "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert_eq!(text.lines().count(), 10);
    let first: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!(first[3].parse::<f64>().unwrap() <= 1e-8);
}

#[test]
fn dynamics_and_pbar_defaults() {
    let out = run(&["dynamics"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap() < 1e-10));

    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "r.cfg", "drive.theta = -90 deg\n");
    let text = String::from_utf8(run(&["dynamics", "--config", &cfg]).stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap() < 1e-10));

    let text = String::from_utf8(run(&["pbar"]).stdout).unwrap();
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    let n = rows.len();
    for (i, r) in rows.iter().enumerate() {
        let m = &rows[n - 1 - i];
        assert!((r[1] - m[2]).abs() < 1e-9);
    }
}

#[test]
fn schema_and_print_config() {
    let out = run(&["absorption", "--schema"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("A_L"));
    let out = run(&["pbar", "--print-config", "--jmax", "12"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("basis.J_max = 12"));
    assert!(text.contains("decay.kappa_MHz = 0.1"));
}
