//! Closed four-level cascade in the rotating frame.
//!
//! Basis order is (alpha, beta+, beta-, gamma) with the beam phases absorbed
//! into the state phases, so the only phases left are the polarization angle
//! `theta` and the forbidden angle `theta_f`. Frequencies are stored as
//! plain MHz (the physical angular frequency is 2 pi times the value) and
//! times are in microseconds.

use std::f64::consts::PI;

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::selection::principal_angle;

/// Eigenvalues of the 4x4 Hamiltonian closer than this (MHz) are grouped
/// as degenerate in the infinite-time average.
pub const DEGENERACY_TOL_MHZ: f64 = 1e-9;

pub type Matrix4c = Matrix4<Complex64>;

pub const ALPHA: usize = 0;
pub const BETA_PLUS: usize = 1;
pub const BETA_MINUS: usize = 2;
pub const GAMMA: usize = 3;

/// Two-beam drive of one enantiomer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamDrive {
    /// Beam-1 Rabi frequency (MHz).
    pub omega1: f64,
    /// Beam-2 Rabi frequency (MHz).
    pub omega2: f64,
    /// One-photon detuning of |beta, +-1> (MHz).
    pub delta1: f64,
    /// Additional detuning of |gamma> on top of `delta1` (MHz).
    pub delta2: f64,
    /// Beam-2 polarization angle (rad).
    pub theta: f64,
    /// Forbidden angle of the simulated enantiomer (rad).
    pub theta_f: f64,
}

impl BeamDrive {
    /// Reference cascade drive: Delta1 = 0.1 MHz,
    /// Delta2 = 0.4 MHz, Omega1 = Omega2 = 1 MHz.
    pub fn reference(theta: f64, theta_f: f64) -> Self {
        Self { omega1: 1.0, omega2: 1.0, delta1: 0.1, delta2: 0.4, theta, theta_f }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega1 >= 0.0 && self.omega2 >= 0.0) {
            return Err(Error::arg("Rabi frequencies must be non-negative"));
        }
        let fields = [self.omega1, self.omega2, self.delta1, self.delta2, self.theta, self.theta_f];
        if fields.iter().any(|x| !x.is_finite()) {
            return Err(Error::arg("drive parameters must be finite"));
        }
        Ok(())
    }

    pub fn with_theta(&self, theta: f64) -> Self {
        Self { theta, ..*self }
    }

    /// The same beams acting on the other enantiomer (theta_f -> -theta_f).
    pub fn mirrored(&self) -> Self {
        Self { theta_f: principal_angle(-self.theta_f), ..*self }
    }
}

/// Rotating-frame Hamiltonian in MHz.
pub fn build_rotating_hamiltonian(drive: &BeamDrive) -> Matrix4c {
    let mut h = Matrix4c::zeros();
    let re = |x: f64| Complex64::new(x, 0.0);
    h[(BETA_PLUS, BETA_PLUS)] = re(drive.delta1);
    h[(BETA_MINUS, BETA_MINUS)] = re(drive.delta1);
    h[(GAMMA, GAMMA)] = re(drive.delta1 + drive.delta2);

    let half1 = re(0.5 * drive.omega1);
    for beta in [BETA_PLUS, BETA_MINUS] {
        h[(beta, ALPHA)] = half1;
        h[(ALPHA, beta)] = half1;
    }
    let g_plus = Complex64::from_polar(0.5 * drive.omega2, drive.theta);
    let g_minus = -Complex64::from_polar(0.5 * drive.omega2, drive.theta_f);
    h[(GAMMA, BETA_PLUS)] = g_plus;
    h[(BETA_PLUS, GAMMA)] = g_plus.conj();
    h[(GAMMA, BETA_MINUS)] = g_minus;
    h[(BETA_MINUS, GAMMA)] = g_minus.conj();
    h
}

/// Amplitudes (c_alpha, c_beta+, c_beta-, c_gamma).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourLevelState(pub Vector4<Complex64>);

impl FourLevelState {
    pub fn new(c_alpha: Complex64, c_beta_plus: Complex64, c_beta_minus: Complex64, c_gamma: Complex64) -> Self {
        Self(Vector4::new(c_alpha, c_beta_plus, c_beta_minus, c_gamma))
    }

    pub fn ground() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self::new(Complex64::new(1.0, 0.0), z, z, z)
    }

    pub fn c_alpha(&self) -> Complex64 {
        self.0[ALPHA]
    }
    pub fn c_beta_plus(&self) -> Complex64 {
        self.0[BETA_PLUS]
    }
    pub fn c_beta_minus(&self) -> Complex64 {
        self.0[BETA_MINUS]
    }
    pub fn c_gamma(&self) -> Complex64 {
        self.0[GAMMA]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.norm_squared()
    }

    pub fn population(&self, level: usize) -> f64 {
        self.0[level].norm_sqr()
    }

    pub fn p_gamma(&self) -> f64 {
        self.population(GAMMA)
    }
}

/// Spectral decomposition of the rotating-frame Hamiltonian.
#[derive(Debug, Clone)]
pub struct Propagator {
    energies: Vector4<f64>,
    vectors: Matrix4c,
}

impl Propagator {
    pub fn new(drive: &BeamDrive) -> Result<Self> {
        drive.validate()?;
        let h = build_rotating_hamiltonian(drive);
        let eig = SymmetricEigen::try_new(h, 1e-15, 1000).ok_or_else(|| Error::Numerical {
            context: "four-level Hamiltonian".into(),
            detail: "eigensolver did not converge".into(),
        })?;
        Ok(Self { energies: eig.eigenvalues, vectors: eig.eigenvectors })
    }

    /// exp(-i 2 pi H t) applied to `initial`; `t` in microseconds.
    pub fn apply(&self, initial: &FourLevelState, t: f64) -> FourLevelState {
        if t == 0.0 {
            return *initial;
        }
        let mut coeffs = self.vectors.ad_mul(&initial.0);
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c *= Complex64::from_polar(1.0, -2.0 * PI * self.energies[k] * t);
        }
        FourLevelState(self.vectors * coeffs)
    }

    /// lim (1/T) int_0^T P_gamma dt via eigenprojectors; eigenvalues within
    /// [`DEGENERACY_TOL_MHZ`] share a projector.
    pub fn time_averaged_population(&self, initial: &FourLevelState, level: usize) -> f64 {
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|&a, &b| self.energies[a].total_cmp(&self.energies[b]));
        let mut total = 0.0;
        let mut group_amp = Complex64::new(0.0, 0.0);
        for (pos, &k) in order.iter().enumerate() {
            if pos > 0 && self.energies[k] - self.energies[order[pos - 1]] > DEGENERACY_TOL_MHZ {
                total += group_amp.norm_sqr();
                group_amp = Complex64::new(0.0, 0.0);
            }
            let v = self.vectors.column(k);
            // <level| P_k |psi0>
            group_amp += v[level] * v.dotc(&initial.0);
        }
        total + group_amp.norm_sqr()
    }
}

fn check_normalized(initial: &FourLevelState) -> Result<()> {
    if (initial.norm_sqr() - 1.0).abs() > 1e-10 {
        return Err(Error::arg(format!("initial state must be normalized, |c|^2 = {}", initial.norm_sqr())));
    }
    Ok(())
}

/// States at each time of `t_grid` (microseconds, ascending from 0).
pub fn evolve(drive: &BeamDrive, initial: &FourLevelState, t_grid: &[f64]) -> Result<Vec<FourLevelState>> {
    check_normalized(initial)?;
    if t_grid.iter().any(|t| !(*t >= 0.0)) || t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::arg("time grid must be ascending and non-negative"));
    }
    let prop = Propagator::new(drive)?;
    Ok(t_grid.iter().map(|&t| prop.apply(initial, t)).collect())
}

/// Infinite-time average of P_gamma.
pub fn time_averaged_p_gamma(drive: &BeamDrive, initial: &FourLevelState) -> Result<f64> {
    check_normalized(initial)?;
    Ok(Propagator::new(drive)?.time_averaged_population(initial, GAMMA))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn undriven_is_diagonal() {
        let d = BeamDrive { omega1: 0.0, omega2: 0.0, ..BeamDrive::reference(0.3, 1.0) };
        let h = build_rotating_hamiltonian(&d);
        let expect = Matrix4c::from_diagonal(&Vector4::new(0.0, 0.1, 0.1, 0.5).map(|x| Complex64::new(x, 0.0)));
        assert_eq!(h, expect);
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let h = build_rotating_hamiltonian(&BeamDrive::reference(0.7, -2.1));
        assert_eq!(h, h.adjoint());
    }

    #[test]
    fn bright_state_decouples_at_forbidden_angle() {
        let d = BeamDrive::reference(FRAC_PI_2, FRAC_PI_2);
        let h = build_rotating_hamiltonian(&d);
        // beam 1 excites (|b+> + |b->)/sqrt 2
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bright = Vector4::new(0.0, s, s, 0.0).map(|x| Complex64::new(x, 0.0));
        assert!((h * bright)[GAMMA].norm() < 1e-16);
    }

    #[test]
    fn zero_time_returns_initial() {
        let d = BeamDrive::reference(0.2, 1.0);
        let psi = FourLevelState::ground();
        let out = evolve(&d, &psi, &[0.0, 0.5]).unwrap();
        assert_eq!(out[0], psi);
        assert!((out[1].norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn selection_rule_in_time() {
        let grid: Vec<f64> = (0..=1000).map(|i| 0.01 * i as f64).collect();
        let left = BeamDrive::reference(FRAC_PI_2, FRAC_PI_2);
        let right = left.mirrored();
        let psi = FourLevelState::ground();
        let pl = evolve(&left, &psi, &grid).unwrap();
        let pr = evolve(&right, &psi, &grid).unwrap();
        assert!(pl.iter().all(|s| s.p_gamma() < 1e-10));
        assert!(pr.iter().map(|s| s.p_gamma()).fold(0.0, f64::max) > 1e-2);
    }

    #[test]
    fn average_vanishes_at_forbidden_angle_and_without_probe() {
        let psi = FourLevelState::ground();
        let d = BeamDrive::reference(FRAC_PI_2, FRAC_PI_2);
        assert!(time_averaged_p_gamma(&d, &psi).unwrap() < 1e-10);
        let d = BeamDrive { omega2: 0.0, ..BeamDrive::reference(0.4, FRAC_PI_2) };
        assert!(time_averaged_p_gamma(&d, &psi).unwrap() < 1e-15);
    }

    #[test]
    fn unnormalized_initial_rejected() {
        let d = BeamDrive::reference(0.0, 1.0);
        let bad = FourLevelState(FourLevelState::ground().0 * Complex64::new(2.0, 0.0));
        assert!(evolve(&d, &bad, &[0.0]).is_err());
        assert!(time_averaged_p_gamma(&d, &bad).is_err());
    }

    #[test]
    fn mirror_is_conjugate_swap() {
        // H_R(-theta) is H_L(theta) with beta+ <-> beta- and diagonal phases,
        // so populations agree level by level after the swap
        let left = BeamDrive::reference(0.9, FRAC_PI_2);
        let right = left.mirrored().with_theta(-0.9);
        let psi = FourLevelState::ground();
        let grid = [0.3, 1.7, 4.2];
        let a = evolve(&left, &psi, &grid).unwrap();
        let b = evolve(&right, &psi, &grid).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.p_gamma() - y.p_gamma()).abs() < 1e-12);
            assert!((x.population(BETA_PLUS) - y.population(BETA_MINUS)).abs() < 1e-12);
        }
    }
}
