//! Stark eigenstates |xi, M> of H_F - E0 d.e_z, one M-block at a time.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rotor::{build_basis, dipole_z_matrix, field_free_matrix, BasisState, MoleculeSpec, DEBYE_KV_CM_MHZ};

/// Energies closer than this (MHz) are treated as degenerate when labeling.
pub const DEGENERACY_TOL_MHZ: f64 = 1e-9;
/// Pivot weights within this of each other tie in the phase convention.
const PIVOT_TIE_TOL: f64 = 1e-12;
/// Hard ceiling for basis truncation.
pub const J_MAX_LIMIT: u32 = 40;

/// Field-independent pieces of one M-block: basis, H_F and d.e_z.
#[derive(Debug, Clone)]
pub struct StarkBlock {
    pub m: i32,
    pub j_max: u32,
    pub basis: Vec<BasisState>,
    field_free: DMatrix<Complex64>,
    dipole_z: DMatrix<Complex64>,
}

impl StarkBlock {
    pub fn new(mol: &MoleculeSpec, m: i32, j_max: u32) -> Result<Self> {
        if j_max > J_MAX_LIMIT {
            return Err(Error::arg(format!("J_max = {j_max} exceeds limit {J_MAX_LIMIT}")));
        }
        let basis = build_basis(j_max, m)?;
        let field_free = field_free_matrix(mol, &basis).map(|x| Complex64::new(x, 0.0));
        let dipole_z = dipole_z_matrix(mol, &basis);
        Ok(Self { m, j_max, basis, field_free, dipole_z })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// H_F - E0 d.e_z in MHz, E0 in kV/cm.
    pub fn hamiltonian(&self, e0_kv_cm: f64) -> DMatrix<Complex64> {
        &self.field_free - &self.dipole_z * Complex64::new(e0_kv_cm * DEBYE_KV_CM_MHZ, 0.0)
    }

    pub fn diagonalize(&self, e0_kv_cm: f64) -> Result<StarkEigensystem> {
        self.diagonalize_tracked(e0_kv_cm, None)
    }

    /// Diagonalize, ordering near-degenerate pairs by overlap with `previous`
    /// (the same block at a neighbouring field) when given.
    pub fn diagonalize_tracked(&self, e0_kv_cm: f64, previous: Option<&StarkEigensystem>) -> Result<StarkEigensystem> {
        if !(e0_kv_cm >= 0.0) || !e0_kv_cm.is_finite() {
            return Err(Error::arg(format!("field strength must be >= 0, got {e0_kv_cm}")));
        }
        let h = self.hamiltonian(e0_kv_cm);
        let n = h.nrows();
        let eig = nalgebra::SymmetricEigen::try_new(h, 1e-15, 100 * n.max(10)).ok_or_else(|| Error::Numerical {
            context: format!("Stark block M={}, J_max={}, E0={e0_kv_cm}", self.m, self.j_max),
            detail: "Hermitian eigensolver did not converge".into(),
        })?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

        let mut energies = Vec::with_capacity(n);
        let mut coefficients = DMatrix::<Complex64>::zeros(n, n);
        for (row, &col) in order.iter().enumerate() {
            energies.push(eig.eigenvalues[col]);
            let v = fix_phase(eig.eigenvectors.column(col).into_owned(), &self.basis);
            coefficients.set_row(row, &v.transpose());
        }

        let mut sys = StarkEigensystem {
            m: self.m,
            e0_kv_cm,
            j_max: self.j_max,
            basis: self.basis.clone(),
            energies,
            coefficients,
        };
        sys.resolve_degenerate_pairs(previous);
        Ok(sys)
    }
}

/// Fix the global phase of an eigenvector over `basis`.
///
/// The pivot is the (J, |K|) pair carrying the most weight (ties go to the
/// lowest index). Within the pair a linear functional q(v) is made real and
/// positive: for K = 0, q = v_0 (or i v_0 when (-1)^(J+M) = -1); for K > 0,
/// q = v_K + p v_-K or q = i (v_K - p v_-K) with p = (-1)^(J+K+M), whichever
/// is larger. The map S_{J,K,M} -> (-1)^(J+K+M) conj(S_{J,-K,M}) relating
/// the two enantiomers sends q to conj(q), so both handednesses land in
/// mutually consistent gauges.
pub fn fix_phase(mut v: DVector<Complex64>, basis: &[BasisState]) -> DVector<Complex64> {
    debug_assert_eq!(v.len(), basis.len());
    let mut pivot = None;
    let mut best = -1.0_f64;
    for (i, s) in basis.iter().enumerate() {
        if s.k < 0 {
            continue;
        }
        let mirror = i - 2 * s.k as usize;
        let weight = if s.k == 0 { v[i].norm_sqr() } else { v[i].norm_sqr() + v[mirror].norm_sqr() };
        if weight > best + PIVOT_TIE_TOL {
            best = weight;
            pivot = Some((i, mirror, *s));
        }
    }
    let Some((i, mirror, s)) = pivot else {
        return v;
    };
    let i_unit = Complex64::new(0.0, 1.0);
    let p = if (s.j + s.k + s.m).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let q = if s.k == 0 {
        if p > 0.0 {
            v[i]
        } else {
            i_unit * v[i]
        }
    } else {
        let q1 = v[i] + v[mirror] * p;
        let q2 = i_unit * (v[i] - v[mirror] * p);
        if q2.norm() > q1.norm() + PIVOT_TIE_TOL {
            q2
        } else {
            q1
        }
    };
    let mag = q.norm();
    if mag > 0.0 {
        v *= q.conj() / mag;
    }
    v
}

/// Eigen-decomposition of one M-block at one field strength.
#[derive(Debug, Clone)]
pub struct StarkEigensystem {
    pub m: i32,
    pub e0_kv_cm: f64,
    pub j_max: u32,
    pub basis: Vec<BasisState>,
    /// epsilon_{xi,M} in MHz, ascending.
    pub energies: Vec<f64>,
    /// S_{xi,J,K;M}: row xi-1, column in basis order.
    pub coefficients: DMatrix<Complex64>,
}

impl StarkEigensystem {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Energy of level `xi` (1-based).
    pub fn energy(&self, xi: usize) -> Result<f64> {
        self.check_level(xi)?;
        Ok(self.energies[xi - 1])
    }

    /// Column vector of coefficients of level `xi` (1-based).
    pub fn state(&self, xi: usize) -> Result<DVector<Complex64>> {
        self.check_level(xi)?;
        Ok(self.coefficients.row(xi - 1).transpose())
    }

    fn check_level(&self, xi: usize) -> Result<()> {
        if xi == 0 || xi > self.len() {
            return Err(Error::arg(format!("level xi = {xi} outside 1..={} of block M={}", self.len(), self.m)));
        }
        Ok(())
    }

    pub(crate) fn resolve_degenerate_pairs(&mut self, previous: Option<&StarkEigensystem>) {
        let Some(prev) = previous.filter(|p| p.basis == self.basis) else {
            return;
        };
        let n = self.len();
        let mut i = 0;
        while i + 1 < n {
            if (self.energies[i + 1] - self.energies[i]).abs() < DEGENERACY_TOL_MHZ {
                let overlap = |row: usize, ref_row: usize| {
                    self.coefficients
                        .row(row)
                        .iter()
                        .zip(prev.coefficients.row(ref_row).iter())
                        .map(|(a, b)| b.conj() * a)
                        .sum::<Complex64>()
                        .norm()
                };
                // keep the pair in the order that best matches the previous labels
                let straight = overlap(i, i) + overlap(i + 1, i + 1);
                let swapped = overlap(i + 1, i) + overlap(i, i + 1);
                if swapped > straight {
                    self.energies.swap(i, i + 1);
                    self.coefficients.swap_rows(i, i + 1);
                }
                i += 2;
            } else {
                i += 1;
            }
        }
    }
}

/// Diagonalize one block from scratch.
pub fn diagonalize_block(mol: &MoleculeSpec, e0_kv_cm: f64, m: i32, j_max: u32) -> Result<StarkEigensystem> {
    if j_max < m.unsigned_abs() + 2 {
        log::warn!("J_max = {j_max} truncates block M={m} below |M| + 2");
    }
    StarkBlock::new(mol, m, j_max)?.diagonalize(e0_kv_cm)
}

/// Smallest truncation for which the lowest `levels_needed` energies of
/// block `m` move by less than `rel_tol` (relative, floored at 1 MHz) when
/// J_max grows by two. Doubling from |M| + 2, then bisection.
pub fn converge_j_max(mol: &MoleculeSpec, e0_kv_cm: f64, m: i32, levels_needed: usize, rel_tol: f64) -> Result<u32> {
    if !(rel_tol > 0.0) {
        return Err(Error::arg(format!("rel_tol must be positive, got {rel_tol}")));
    }
    if levels_needed == 0 {
        return Err(Error::arg("levels_needed must be at least 1"));
    }
    let mut last_change = f64::INFINITY;
    let mut passes = |j: u32| -> Result<bool> {
        let lo = StarkBlock::new(mol, m, j)?;
        if lo.dim() < levels_needed {
            return Ok(false);
        }
        let a = lo.diagonalize(e0_kv_cm)?;
        let b = StarkBlock::new(mol, m, j + 2)?.diagonalize(e0_kv_cm)?;
        let change = a.energies[..levels_needed]
            .iter()
            .zip(&b.energies[..levels_needed])
            .map(|(x, y)| (x - y).abs() / x.abs().max(1.0))
            .fold(0.0, f64::max);
        last_change = change;
        Ok(change < rel_tol)
    };

    let start = m.unsigned_abs() + 2;
    let mut failed = start - 1;
    let mut j = start;
    loop {
        if j + 2 > J_MAX_LIMIT {
            return Err(Error::Convergence { limit: J_MAX_LIMIT, last_change });
        }
        if passes(j)? {
            break;
        }
        failed = j;
        j = (2 * j).min(J_MAX_LIMIT - 2).max(j + 1);
    }
    // smallest passing value in (failed, j]
    let mut hi = j;
    let mut lo = failed;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if passes(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
