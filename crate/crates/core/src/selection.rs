//! Two-photon cascade couplings, forbidden polarization angles and the
//! degree of enantiospecificity.
//!
//! The cascade is |alpha, 0> -> |beta, +-1> -> |gamma, 0>, with
//! ```text
//! a_+- = <beta, +-1| d.e_+- |alpha, 0>
//! b_+- = <gamma, 0| d.e_+- |beta, -+1>
//! theta_f = arg(-conj(a_+) conj(b_-) b_+ a_-)
//! ```
//! Beam 2 polarized along sin(theta/2) e_x - cos(theta/2) e_y drives the
//! dressed intermediate state with amplitude proportional to
//! `a_- b_+ + a_+ b_- e^{i theta}`, which vanishes at `theta = theta_f`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rotor::{dipole_pm_matrix, Circular, Handedness, MoleculeSpec};
use crate::stark::{converge_j_max, StarkBlock, StarkEigensystem};

/// Transition dipoles below this (Debye) count as vanishing.
pub const VANISHING_DIPOLE_DEBYE: f64 = 1e-12;
/// Allowed relative splitting of the |beta, +1> / |beta, -1> doublet.
pub const BETA_DEGENERACY_REL: f64 = 1e-10;

/// Level selection (alpha, beta, gamma): 1-based xi indices, alpha and gamma
/// in the M = 0 block, beta in the M = +-1 blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TransitionTriple {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
}

impl TransitionTriple {
    pub fn new(alpha: usize, beta: usize, gamma: usize) -> Result<Self> {
        if alpha == 0 || beta == 0 || gamma == 0 {
            return Err(Error::arg("level indices are 1-based"));
        }
        if alpha == gamma {
            return Err(Error::arg("alpha and gamma must be different levels"));
        }
        Ok(Self { alpha, beta, gamma })
    }

    pub fn max_level(&self) -> usize {
        self.alpha.max(self.beta).max(self.gamma)
    }
}

/// a_+-, b_+- for one enantiomer with the resulting forbidden angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSet {
    pub a_plus: Complex64,
    pub a_minus: Complex64,
    pub b_plus: Complex64,
    pub b_minus: Complex64,
    /// Radians in (-pi, pi].
    pub theta_f: f64,
    pub handedness: Handedness,
}

impl CouplingSet {
    /// Build from the four coefficients, computing `theta_f`.
    pub fn new(
        a_plus: Complex64,
        a_minus: Complex64,
        b_plus: Complex64,
        b_minus: Complex64,
        handedness: Handedness,
    ) -> Result<Self> {
        let theta_f = forbidden_angle(a_plus, a_minus, b_plus, b_minus)?;
        Ok(Self { a_plus, a_minus, b_plus, b_minus, theta_f, handedness })
    }

    /// The quadruple product -conj(a_+) conj(b_-) b_+ a_-.
    pub fn quadruple_product(&self) -> Complex64 {
        quadruple_product(self.a_plus, self.a_minus, self.b_plus, self.b_minus)
    }
}

fn quadruple_product(a_plus: Complex64, a_minus: Complex64, b_plus: Complex64, b_minus: Complex64) -> Complex64 {
    -a_plus.conj() * b_minus.conj() * b_plus * a_minus
}

/// Wrap an angle into (-pi, pi].
pub fn principal_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Forbidden polarization angle, principal branch (-pi, pi].
pub fn forbidden_angle(a_plus: Complex64, a_minus: Complex64, b_plus: Complex64, b_minus: Complex64) -> Result<f64> {
    for (name, c) in [("a_+", a_plus), ("a_-", a_minus), ("b_+", b_plus), ("b_-", b_minus)] {
        if c.norm() < VANISHING_DIPOLE_DEBYE {
            return Err(Error::VanishingDipole { name, magnitude: c.norm() });
        }
    }
    let prod = quadruple_product(a_plus, a_minus, b_plus, b_minus);
    if prod.norm() < VANISHING_DIPOLE_DEBYE.powi(4) {
        return Err(Error::VanishingDipole { name: "a_+ b_- b_+ a_-", magnitude: prod.norm() });
    }
    let t = prod.im.atan2(prod.re);
    Ok(if t <= -PI { t + 2.0 * PI } else { t })
}

/// `a_- b_+ + a_+ b_- e^{i theta}`; proportional to the beam-2 matrix
/// element between the dressed state and |gamma, 0>.
pub fn effective_two_photon_coupling(c: &CouplingSet, theta: f64) -> Complex64 {
    c.a_minus * c.b_plus + c.a_plus * c.b_minus * Complex64::from_polar(1.0, theta)
}

/// D = sin^2((theta_f^L - theta_f^R) / 2), in [0, 1].
pub fn degree_of_enantiospecificity(theta_f_left: f64, theta_f_right: f64) -> f64 {
    (0.5 * (theta_f_left - theta_f_right)).sin().powi(2)
}

/// The four circular dipole matrices linking the M = 0 and M = +-1 blocks.
#[derive(Debug, Clone)]
pub struct CascadeOperators {
    /// d.e_+ : M=0 -> M=+1
    pub plus_from_0: DMatrix<Complex64>,
    /// d.e_- : M=0 -> M=-1
    pub minus_from_0: DMatrix<Complex64>,
    /// d.e_+ : M=-1 -> M=0
    pub plus_to_0: DMatrix<Complex64>,
    /// d.e_- : M=+1 -> M=0
    pub minus_to_0: DMatrix<Complex64>,
}

impl CascadeOperators {
    /// Couplings from explicit eigenvectors. The vectors must be expressed in
    /// the bases the operators were built on.
    pub fn couplings(
        &self,
        alpha: &DVector<Complex64>,
        beta_plus: &DVector<Complex64>,
        beta_minus: &DVector<Complex64>,
        gamma: &DVector<Complex64>,
        handedness: Handedness,
    ) -> Result<CouplingSet> {
        let braket =
            |bra: &DVector<Complex64>, op: &DMatrix<Complex64>, ket: &DVector<Complex64>| bra.dotc(&(op * ket));
        CouplingSet::new(
            braket(beta_plus, &self.plus_from_0, alpha),
            braket(beta_minus, &self.minus_from_0, alpha),
            braket(gamma, &self.plus_to_0, beta_minus),
            braket(gamma, &self.minus_to_0, beta_plus),
            handedness,
        )
    }
}

/// Field-independent data for the cascade of one enantiomer at a fixed
/// truncation: the three Stark blocks and the circular dipole operators.
#[derive(Debug, Clone)]
pub struct CascadeModel {
    pub handedness: Handedness,
    pub j_max: u32,
    pub block_0: StarkBlock,
    pub block_plus: StarkBlock,
    pub block_minus: StarkBlock,
    pub operators: CascadeOperators,
}

/// Stark eigensystems of the three blocks at one field strength.
#[derive(Debug, Clone)]
pub struct CascadeEigen {
    pub m0: StarkEigensystem,
    pub plus: StarkEigensystem,
    pub minus: StarkEigensystem,
}

impl CascadeModel {
    pub fn new(mol: &MoleculeSpec, j_max: u32) -> Result<Self> {
        if j_max < 2 {
            return Err(Error::arg("cascade needs J_max >= 2"));
        }
        let block_0 = StarkBlock::new(mol, 0, j_max)?;
        let block_plus = StarkBlock::new(mol, 1, j_max)?;
        let block_minus = StarkBlock::new(mol, -1, j_max)?;
        let operators = CascadeOperators {
            plus_from_0: dipole_pm_matrix(mol, &block_plus.basis, &block_0.basis, Circular::Plus),
            minus_from_0: dipole_pm_matrix(mol, &block_minus.basis, &block_0.basis, Circular::Minus),
            plus_to_0: dipole_pm_matrix(mol, &block_0.basis, &block_minus.basis, Circular::Plus),
            minus_to_0: dipole_pm_matrix(mol, &block_0.basis, &block_plus.basis, Circular::Minus),
        };
        Ok(Self { handedness: mol.handedness, j_max, block_0, block_plus, block_minus, operators })
    }

    pub fn eigen(&self, e0_kv_cm: f64) -> Result<CascadeEigen> {
        Ok(CascadeEigen {
            m0: self.block_0.diagonalize(e0_kv_cm)?,
            plus: self.block_plus.diagonalize(e0_kv_cm)?,
            minus: self.block_minus.diagonalize(e0_kv_cm)?,
        })
    }

    pub fn couplings(&self, eigen: &CascadeEigen, triple: &TransitionTriple) -> Result<CouplingSet> {
        let e_plus = eigen.plus.energy(triple.beta)?;
        let e_minus = eigen.minus.energy(triple.beta)?;
        if (e_plus - e_minus).abs() > BETA_DEGENERACY_REL * e_plus.abs().max(1.0) {
            return Err(Error::Numerical {
                context: format!("beta = {} at E0 = {}", triple.beta, eigen.m0.e0_kv_cm),
                detail: format!("M = +1 and M = -1 levels split by {:.3e} MHz", e_plus - e_minus),
            });
        }
        self.operators.couplings(
            &eigen.m0.state(triple.alpha)?,
            &eigen.plus.state(triple.beta)?,
            &eigen.minus.state(triple.beta)?,
            &eigen.m0.state(triple.gamma)?,
            self.handedness,
        )
    }
}

/// a_+-, b_+- and theta_f for one enantiomer at one field strength.
pub fn coupling_coefficients(
    mol: &MoleculeSpec,
    e0_kv_cm: f64,
    triple: &TransitionTriple,
    j_max: u32,
) -> Result<CouplingSet> {
    let model = CascadeModel::new(mol, j_max)?;
    let eigen = model.eigen(e0_kv_cm)?;
    model.couplings(&eigen, triple)
}

/// J_max converging the lowest `levels` energies of the M = 0 and M = +-1
/// blocks at field `e0_kv_cm` (use the largest field of a sweep).
pub fn converge_cascade_j_max(mol: &MoleculeSpec, e0_kv_cm: f64, levels: usize, rel_tol: f64) -> Result<u32> {
    // +-M blocks share a spectrum
    let j0 = converge_j_max(mol, e0_kv_cm, 0, levels, rel_tol)?;
    let j1 = converge_j_max(mol, e0_kv_cm, 1, levels, rel_tol)?;
    Ok(j0.max(j1))
}

/// One row of a field sweep. `None` marks a grid point where a transition
/// dipole vanishes and the forbidden angle is undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub e0_kv_cm: f64,
    pub theta_f_left: Option<f64>,
    pub theta_f_right: Option<f64>,
    pub degree: Option<f64>,
}

fn label_chain(model: &CascadeModel, grid: &[f64]) -> Result<Vec<CascadeEigen>> {
    let mut eigen = grid.par_iter().map(|&e0| model.eigen(e0)).collect::<Result<Vec<_>>>()?;
    // sequential pass for xi-label continuity across near-degeneracies
    for i in 1..eigen.len() {
        let (done, rest) = eigen.split_at_mut(i);
        let prev = &done[i - 1];
        let cur = &mut rest[0];
        cur.m0.resolve_degenerate_pairs(Some(&prev.m0));
        cur.plus.resolve_degenerate_pairs(Some(&prev.plus));
        cur.minus.resolve_degenerate_pairs(Some(&prev.minus));
    }
    Ok(eigen)
}

/// theta_f^L, theta_f^R and D over a monotone grid of field strengths.
pub fn sweep_field(
    mol: &MoleculeSpec,
    triple: &TransitionTriple,
    e0_grid: &[f64],
    j_max: u32,
) -> Result<Vec<SweepRow>> {
    if e0_grid.is_empty() {
        return Err(Error::arg("empty E0 grid"));
    }
    if e0_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::arg("E0 grid must be strictly increasing"));
    }
    let left = CascadeModel::new(&mol.with_handedness(Handedness::Left), j_max)?;
    let right = CascadeModel::new(&mol.with_handedness(Handedness::Right), j_max)?;
    let eig_left = label_chain(&left, e0_grid)?;
    let eig_right = label_chain(&right, e0_grid)?;

    let angle = |model: &CascadeModel, eigen: &CascadeEigen| -> Result<Option<f64>> {
        match model.couplings(eigen, triple) {
            Ok(c) => Ok(Some(c.theta_f)),
            Err(Error::VanishingDipole { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };

    e0_grid
        .par_iter()
        .enumerate()
        .map(|(i, &e0)| {
            let tl = angle(&left, &eig_left[i])?;
            let tr = angle(&right, &eig_right[i])?;
            let degree = match (tl, tr) {
                (Some(l), Some(r)) => Some(degree_of_enantiospecificity(l, r)),
                _ => None,
            };
            Ok(SweepRow { e0_kv_cm: e0, theta_f_left: tl, theta_f_right: tr, degree })
        })
        .collect()
}
