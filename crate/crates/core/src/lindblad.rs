//! Driven four-level cascade with spontaneous emission.
//!
//! Superoperators act on column-stacked density matrices,
//! vec(A rho B) = (B^T kron A) vec(rho). Rates and frequencies are MHz; the
//! generator carries the 2 pi so that time is in microseconds.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::dynamics::{build_rotating_hamiltonian, BeamDrive, Matrix4c, ALPHA, BETA_MINUS, BETA_PLUS, GAMMA};
use crate::error::{Error, Result};

/// Relative singular-value threshold for the kernel of the Liouvillian.
pub const KERNEL_REL_TOL: f64 = 1e-10;

/// Five decay channels (to, from): gamma -> beta+, beta-, alpha and beta+- -> alpha.
pub const DECAY_CHANNELS: [(usize, usize); 5] =
    [(BETA_PLUS, GAMMA), (BETA_MINUS, GAMMA), (ALPHA, GAMMA), (ALPHA, BETA_PLUS), (ALPHA, BETA_MINUS)];

/// Common spontaneous emission rate of every channel (MHz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayModel {
    pub kappa: f64,
}

impl DecayModel {
    pub fn new(kappa: f64) -> Result<Self> {
        let d = Self { kappa };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(Error::arg(format!("decay rate must be finite and >= 0, got {}", self.kappa)));
        }
        Ok(())
    }
}

impl Default for DecayModel {
    fn default() -> Self {
        Self { kappa: 0.1 }
    }
}

/// Density matrix over (alpha, beta+, beta-, gamma).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4(pub Matrix4c);

impl DensityMatrix4 {
    pub fn pure_ground() -> Self {
        let mut m = Matrix4c::zeros();
        m[(ALPHA, ALPHA)] = Complex64::new(1.0, 0.0);
        Self(m)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn population(&self, level: usize) -> f64 {
        self.0[(level, level)].re
    }

    pub fn hermiticity_error(&self) -> f64 {
        (self.0 - self.0.adjoint()).camax()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(herm).eigenvalues.min()
    }

    pub fn to_vec(&self) -> DVector<Complex64> {
        DVector::from_column_slice(self.0.as_slice())
    }

    pub fn from_vec(v: &DVector<Complex64>) -> Self {
        Self(Matrix4::from_column_slice(v.as_slice()))
    }
}

fn kron(a: &Matrix4c, b: &Matrix4c) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(16, 16);
    for (i, j) in index_pairs() {
        let s = a[(i, j)];
        if s == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (k, l) in index_pairs() {
            out[(4 * i + k, 4 * j + l)] = s * b[(k, l)];
        }
    }
    out
}

fn index_pairs() -> impl Iterator<Item = (usize, usize)> {
    (0..4).flat_map(|i| (0..4).map(move |j| (i, j)))
}

fn ket_bra(to: usize, from: usize) -> Matrix4c {
    let mut m = Matrix4c::zeros();
    m[(to, from)] = Complex64::new(1.0, 0.0);
    m
}

/// Generator L with d vec(rho)/dt = L vec(rho), t in microseconds.
pub fn build_liouvillian(drive: &BeamDrive, decay: &DecayModel) -> Result<DMatrix<Complex64>> {
    drive.validate()?;
    decay.validate()?;
    let h = build_rotating_hamiltonian(drive);
    let id = Matrix4c::identity();
    let minus_i = Complex64::new(0.0, -1.0);
    let mut l = (kron(&id, &h) - kron(&h.transpose(), &id)) * minus_i;
    if decay.kappa > 0.0 {
        let k = Complex64::new(decay.kappa, 0.0);
        let half = Complex64::new(0.5, 0.0);
        for (to, from) in DECAY_CHANNELS {
            let o = ket_bra(to, from);
            let oo = o.adjoint() * o;
            l += (kron(&o.conjugate(), &o) - (kron(&id, &oo) + kron(&oo.transpose(), &id)) * half) * k;
        }
    }
    Ok(l * Complex64::new(2.0 * PI, 0.0))
}

/// Unique stationary state from the null space of `l`.
pub fn steady_state(l: &DMatrix<Complex64>) -> Result<DensityMatrix4> {
    if l.shape() != (16, 16) {
        return Err(Error::arg(format!("Liouvillian must be 16x16, got {:?}", l.shape())));
    }
    let svd = l
        .clone()
        .try_svd(false, true, 1e-15, 10_000)
        .ok_or_else(|| Error::Numerical { context: "steady state".into(), detail: "SVD did not converge".into() })?;
    let sv = &svd.singular_values;
    let scale = sv.max();
    if scale == 0.0 {
        return Err(Error::NonUniqueSteadyState { null_dim: 16 });
    }
    let null_dim = sv.iter().filter(|&&s| s < KERNEL_REL_TOL * scale).count();
    if null_dim != 1 {
        return Err(Error::NonUniqueSteadyState { null_dim });
    }
    let idx = sv.imin();
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let v: DVector<Complex64> = v_t.row(idx).adjoint();

    let raw = DensityMatrix4::from_vec(&v).0;
    let herm = (raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
    let tr = herm.trace();
    if tr.norm() < 1e-300 {
        return Err(Error::Numerical { context: "steady state".into(), detail: "null vector has zero trace".into() });
    }
    Ok(DensityMatrix4(herm / tr))
}

/// Steady state of one drive configuration.
pub fn solve_steady_state(drive: &BeamDrive, decay: &DecayModel) -> Result<DensityMatrix4> {
    if decay.kappa == 0.0 {
        return Err(Error::arg("steady state requires dissipation (kappa > 0)"));
    }
    steady_state(&build_liouvillian(drive, decay)?)
}

/// Beam-2 absorption signal Im Tr(rho_ss d+) / (Omega2/2).
pub fn absorption(drive: &BeamDrive, decay: &DecayModel) -> Result<f64> {
    Ok(absorption_with_state(drive, decay)?.0)
}

/// Absorption together with the steady state it was computed from.
pub fn absorption_with_state(drive: &BeamDrive, decay: &DecayModel) -> Result<(f64, DensityMatrix4)> {
    if !(drive.omega2 > 0.0) {
        return Err(Error::arg("absorption needs a probe, Omega2 > 0"));
    }
    let rho = solve_steady_state(drive, decay)?;
    // Tr(rho |b><g|) = rho[g, b]
    let tr = Complex64::from_polar(1.0, -drive.theta_f) * rho.0[(GAMMA, BETA_MINUS)]
        - Complex64::from_polar(1.0, -drive.theta) * rho.0[(GAMMA, BETA_PLUS)];
    Ok((tr.im / (0.5 * drive.omega2), rho))
}

/// One row of an absorption sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorptionRow {
    pub theta: f64,
    pub left: f64,
    pub right: f64,
}

/// A(theta) for both enantiomers. `template.theta_f` is the left-handed
/// forbidden angle; the right-handed one is its negative.
pub fn absorption_sweep(template: &BeamDrive, decay: &DecayModel, theta_grid: &[f64]) -> Result<Vec<AbsorptionRow>> {
    use rayon::prelude::*;
    if theta_grid.is_empty() {
        return Err(Error::arg("theta grid is empty"));
    }
    let right = template.mirrored();
    theta_grid
        .par_iter()
        .map(|&theta| {
            Ok(AbsorptionRow {
                theta,
                left: absorption(&template.with_theta(theta), decay)?,
                right: absorption(&right.with_theta(theta), decay)?,
            })
        })
        .collect()
}
