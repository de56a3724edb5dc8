//! Pinned CSV outputs of the shipped configs.
//!
//! Regenerate with `UPDATE_GOLDEN=1 cargo test --test golden` after a
//! deliberate numerical change.

use std::path::PathBuf;

use chiral_tpsr::cli::Command;
use chiral_tpsr::config::RunConfig;
use chiral_tpsr::dynamics::BeamDrive;
use chiral_tpsr::lindblad::{absorption, DecayModel};
use chiral_tpsr::rotor::{Handedness, MoleculeSpec};
use chiral_tpsr::selection::converge_cascade_j_max;
use chiral_tpsr::stark::converge_j_max;

const TOL: f64 = 1e-9;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn check(config: &str, command: Command, golden: &str) {
    let cfg = RunConfig::from_file(&root().join("configs").join(config)).unwrap();
    let csv = command.run(&cfg).unwrap();
    let path = root().join("tests/golden").join(golden);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &csv).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    let (a, b): (Vec<&str>, Vec<&str>) = (csv.lines().collect(), expected.lines().collect());
    assert_eq!(a.len(), b.len(), "{golden}: row count");
    assert_eq!(a[0], b[0], "{golden}: header");
    for (row, (x, y)) in a.iter().zip(&b).enumerate().skip(1) {
        for (u, v) in x.split(',').zip(y.split(',')) {
            match (u.parse::<f64>(), v.parse::<f64>()) {
                (Ok(p), Ok(q)) => assert!((p - q).abs() <= TOL, "{golden} row {row}: {p} vs {q}"),
                _ => assert_eq!(u, v, "{golden} row {row}"),
            }
        }
    }
}

#[test]
fn theta_f_1_1_4() {
    check("theta_f_1_1_4.cfg", Command::ThetaF, "theta_f_1_1_4.csv");
}

#[test]
fn theta_f_1_3_2() {
    check("theta_f_1_3_2.cfg", Command::ThetaF, "theta_f_1_3_2.csv");
}

#[test]
fn absorption_default_probe() {
    check("absorption.cfg", Command::Absorption, "absorption.csv");
}

#[test]
fn theta_f_first_row_and_antisymmetry() {
    let csv = std::fs::read_to_string(root().join("tests/golden/theta_f_1_1_4.csv")).unwrap();
    let rows: Vec<Vec<f64>> = csv.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert!(rows[0][3] <= 1e-8);
    for r in &rows {
        let s = (r[1] + r[2]).rem_euclid(2.0 * std::f64::consts::PI);
        assert!(s.min(2.0 * std::f64::consts::PI - s) < 1e-10);
    }
}

#[test]
fn pinned_truncations() {
    let mol = MoleculeSpec::propanediol(Handedness::Left);
    for m in [0, 1, -1] {
        assert_eq!(converge_j_max(&mol, 20.0, m, 4, 1e-8).unwrap(), 7, "M = {m}");
    }
    assert_eq!(converge_cascade_j_max(&mol, 20.0, 6, 1e-10).unwrap(), 8);
}

#[test]
fn pinned_cross_absorption() {
    // left-handed molecule probed at the right-handed forbidden angle
    let d =
        BeamDrive { omega2: 0.1, ..BeamDrive::reference(-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2) };
    let a = absorption(&d, &DecayModel::default()).unwrap();
    assert!((a - 0.8468901).abs() < 1e-6, "{a}");
}
