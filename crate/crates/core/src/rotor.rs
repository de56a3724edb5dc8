//! Rigid asymmetric-top rotor in the symmetric-top basis |J, K, M>.
//!
//! Energies are plain frequencies in MHz (E = h * nu); dipoles are in Debye.
//! All matrix elements are written for the left-handed enantiomer and mapped
//! to the right-handed one by [`enantiomer_sign`].

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::angular::w3j;
use crate::error::{Error, Result};

/// Debye in C*m (exact, 1e-21 / c).
pub const DEBYE_C_M: f64 = 1e-21 / 299_792_458.0;
/// Planck constant in J*s (exact SI).
pub const PLANCK_J_S: f64 = 6.626_070_15e-34;
/// Frequency of 1 Debye in a 1 kV/cm field, in MHz: (1 D * 1 kV/cm) / h.
pub const DEBYE_KV_CM_MHZ: f64 = DEBYE_C_M * 1.0e5 / PLANCK_J_S / 1.0e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Handedness {
    Left,
    Right,
}

impl Handedness {
    pub fn mirror(self) -> Self {
        match self {
            Handedness::Left => Handedness::Right,
            Handedness::Right => Handedness::Left,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Handedness::Left => "L",
            Handedness::Right => "R",
        }
    }
}

impl fmt::Display for Handedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One enantiomer of a rigid asymmetric top.
///
/// `a_mhz`, `b_mhz`, `c_mhz` are rotational constants as frequencies and the
/// dipole components are those of the left-handed form in its principal
/// (a, b, c) frame. The right-handed form shares every number; only the sign
/// of the dipole matrices differs.
#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeSpec {
    pub name: String,
    pub a_mhz: f64,
    pub b_mhz: f64,
    pub c_mhz: f64,
    pub d_a: f64,
    pub d_b: f64,
    pub d_c: f64,
    pub handedness: Handedness,
}

/// Name of the shipped 1,2-propanediol preset.
pub const PROPANEDIOL: &str = "propanediol-1,2";

pub fn preset_names() -> &'static [&'static str] {
    &[PROPANEDIOL]
}

impl MoleculeSpec {
    pub fn new(
        name: impl Into<String>,
        [a_mhz, b_mhz, c_mhz]: [f64; 3],
        [d_a, d_b, d_c]: [f64; 3],
        handedness: Handedness,
    ) -> Result<Self> {
        let name = name.into();
        if !(a_mhz > 0.0 && b_mhz > 0.0 && c_mhz > 0.0) {
            return Err(Error::arg(format!(
                "rotational constants must be positive, got A={a_mhz}, B={b_mhz}, C={c_mhz}"
            )));
        }
        if ![d_a, d_b, d_c].iter().all(|d| d.is_finite()) {
            return Err(Error::arg("dipole components must be finite"));
        }
        if d_a == 0.0 && d_b == 0.0 && d_c == 0.0 {
            return Err(Error::arg("at least one dipole component must be nonzero"));
        }
        if a_mhz < b_mhz || a_mhz < c_mhz {
            log::warn!("{name}: A is expected to be the largest rotational constant");
        }
        Ok(Self { name, a_mhz, b_mhz, c_mhz, d_a, d_b, d_c, handedness })
    }

    /// Look up a shipped molecule by name.
    pub fn preset(name: &str, handedness: Handedness) -> Result<Self> {
        match name {
            PROPANEDIOL => Self::new(PROPANEDIOL, [8572.05, 3640.10, 2790.96], [-1.201, -1.916, -0.365], handedness),
            other => {
                Err(Error::arg(format!("unknown molecule preset '{other}'; available: {}", preset_names().join(", "))))
            }
        }
    }

    pub fn propanediol(handedness: Handedness) -> Self {
        Self::preset(PROPANEDIOL, handedness).expect("shipped preset is valid")
    }

    pub fn with_handedness(&self, handedness: Handedness) -> Self {
        Self { handedness, ..self.clone() }
    }

    pub fn mirror(&self) -> Self {
        self.with_handedness(self.handedness.mirror())
    }

    pub fn spherical_dipole(&self) -> SphericalDipole {
        SphericalDipole::from_components(self.d_a, self.d_b, self.d_c)
    }
}

/// Body-frame spherical components mu_0, mu_{+1}, mu_{-1} (Debye).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalDipole {
    pub mu0: Complex64,
    pub plus: Complex64,
    pub minus: Complex64,
}

impl SphericalDipole {
    pub fn from_components(d_a: f64, d_b: f64, d_c: f64) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            mu0: Complex64::new(-d_a, 0.0),
            plus: Complex64::new(d_b, d_c) * s,
            minus: -Complex64::new(d_b, -d_c) * s,
        }
    }

    /// Component for sigma in {-1, 0, 1}.
    pub fn get(&self, sigma: i32) -> Complex64 {
        match sigma {
            0 => self.mu0,
            1 => self.plus,
            -1 => self.minus,
            _ => Complex64::new(0.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    pub j: i32,
    pub k: i32,
    pub m: i32,
}

impl BasisState {
    pub fn new(j: i32, k: i32, m: i32) -> Result<Self> {
        if j < 0 || k.abs() > j || m.abs() > j {
            return Err(Error::arg(format!("invalid basis state |J={j}, K={k}, M={m}>")));
        }
        Ok(Self { j, k, m })
    }
}

/// Ordered basis of the M-block: ascending J from |M| to `j_max`, then
/// ascending K.
pub fn build_basis(j_max: u32, m: i32) -> Result<Vec<BasisState>> {
    let j_max = j_max as i32;
    if j_max < m.abs() {
        return Err(Error::arg(format!("J_max = {j_max} is below |M| = {}", m.abs())));
    }
    let mut basis = Vec::with_capacity(((j_max + 1).pow(2) - m.abs().pow(2)) as usize);
    for j in m.abs()..=j_max {
        for k in -j..=j {
            basis.push(BasisState { j, k, m });
        }
    }
    Ok(basis)
}

/// Field-free rotor Hamiltonian element <J,K|H_F|J',K'> in MHz (M-diagonal,
/// M-independent).
pub fn field_free_element(mol: &MoleculeSpec, j: i32, k: i32, jp: i32, kp: i32) -> f64 {
    if j != jp {
        return 0.0;
    }
    let jj = (j * (j + 1)) as f64;
    let kf = k as f64;
    if kp == k {
        0.5 * (mol.b_mhz + mol.c_mhz) * (jj - kf * kf) + mol.a_mhz * kf * kf
    } else if kp == k + 2 || kp == k - 2 {
        let s = if kp > k { 1.0 } else { -1.0 };
        let t1 = jj - kf * (kf + s);
        let t2 = jj - (kf + s) * (kf + 2.0 * s);
        0.25 * (mol.b_mhz - mol.c_mhz) * (t1 * t2).max(0.0).sqrt()
    } else {
        0.0
    }
}

fn parity(n: i32) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Body-frame part shared by the d.e_z and d.e_+- elements:
/// sum over sigma' of mu_sigma' (-1)^sigma' (J 1 J'; K -sigma' -K').
fn body_sum(mu: &SphericalDipole, bra: &BasisState, ket: &BasisState) -> Complex64 {
    // only sigma' = K - K' survives the m-sum rule
    let sigma = bra.k - ket.k;
    if sigma.abs() > 1 {
        return Complex64::new(0.0, 0.0);
    }
    mu.get(sigma) * parity(sigma) * w3j(bra.j, 1, ket.j, bra.k, -sigma, -ket.k)
}

/// Laboratory sign rule from handedness: dipole matrices flip sign.
fn dipole_sign(mol: &MoleculeSpec) -> f64 {
    enantiomer_sign(MatrixKind::Dipole, mol.handedness)
}

/// <bra| d.e_z |ket> in Debye.
pub fn dipole_z_element(mol: &MoleculeSpec, bra: &BasisState, ket: &BasisState) -> Complex64 {
    if bra.m != ket.m || (bra.j - ket.j).abs() > 1 {
        return Complex64::new(0.0, 0.0);
    }
    let lab = w3j(bra.j, 1, ket.j, bra.m, 0, -ket.m);
    if lab == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let norm = (((2 * bra.j + 1) * (2 * ket.j + 1)) as f64).sqrt();
    let phase = parity(ket.m + 1 - ket.k);
    body_sum(&mol.spherical_dipole(), bra, ket) * (dipole_sign(mol) * norm * lab * phase)
}

/// Circular lab polarization e_+ or e_-.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Circular {
    Plus,
    Minus,
}

impl Circular {
    pub fn sign(self) -> i32 {
        match self {
            Circular::Plus => 1,
            Circular::Minus => -1,
        }
    }
}

/// <bra| d.e_+- |ket> in Debye; nonzero only for M_bra = M_ket +- 1.
pub fn dipole_pm_element(mol: &MoleculeSpec, bra: &BasisState, ket: &BasisState, pol: Circular) -> Complex64 {
    let q = pol.sign();
    if bra.m != ket.m + q || (bra.j - ket.j).abs() > 1 {
        return Complex64::new(0.0, 0.0);
    }
    let lab = w3j(bra.j, 1, ket.j, bra.m, -q, -ket.m);
    if lab == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let norm = (((2 * bra.j + 1) * (2 * ket.j + 1)) as f64).sqrt();
    let phase = parity(ket.m - ket.k);
    body_sum(&mol.spherical_dipole(), bra, ket) * (dipole_sign(mol) * norm * lab * phase)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    FieldFree,
    Dipole,
}

/// Factor taking a left-handed matrix element to the enantiomer `target`.
/// The field-free rotor is unchanged under inversion; every lab-frame
/// dipole operator (d.e_z, d.e_+-) changes sign.
pub fn enantiomer_sign(kind: MatrixKind, target: Handedness) -> f64 {
    match (kind, target) {
        (_, Handedness::Left) | (MatrixKind::FieldFree, Handedness::Right) => 1.0,
        (MatrixKind::Dipole, Handedness::Right) => -1.0,
    }
}

/// Map a left-handed matrix onto the right-handed enantiomer.
pub fn map_to_right(kind: MatrixKind, left: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    left * Complex64::new(enantiomer_sign(kind, Handedness::Right), 0.0)
}

/// Real symmetric field-free block over `basis`.
pub fn field_free_matrix(mol: &MoleculeSpec, basis: &[BasisState]) -> DMatrix<f64> {
    let n = basis.len();
    DMatrix::from_fn(n, n, |r, c| {
        let (b, k) = (&basis[r], &basis[c]);
        field_free_element(mol, b.j, b.k, k.j, k.k)
    })
}

/// d.e_z over one M-block.
pub fn dipole_z_matrix(mol: &MoleculeSpec, basis: &[BasisState]) -> DMatrix<Complex64> {
    let n = basis.len();
    DMatrix::from_fn(n, n, |r, c| dipole_z_element(mol, &basis[r], &basis[c]))
}

/// d.e_+- between two blocks; rows index `bra_basis`, columns `ket_basis`.
pub fn dipole_pm_matrix(
    mol: &MoleculeSpec,
    bra_basis: &[BasisState],
    ket_basis: &[BasisState],
    pol: Circular,
) -> DMatrix<Complex64> {
    DMatrix::from_fn(bra_basis.len(), ket_basis.len(), |r, c| dipole_pm_element(mol, &bra_basis[r], &ket_basis[c], pol))
}
