//! Subcommands as pure functions from a [`RunConfig`] to CSV text.
//!
//! Numbers are written with 12 significant digits in scientific notation;
//! rows follow grid order, so identical configs give identical bytes.

use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::config::{JMax, RunConfig, ThetaF};
use crate::dynamics::{evolve, time_averaged_p_gamma, FourLevelState};
use crate::error::{Error, Result};
use crate::lindblad::absorption_sweep;
use crate::rotor::MoleculeSpec;
use crate::selection::{converge_cascade_j_max, coupling_coefficients, sweep_field};
use crate::stark::{converge_j_max, diagonalize_block};

/// Marks a forbidden angle that does not exist because a dipole vanishes.
pub const UNDEFINED: &str = "undefined";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    ThetaF,
    Dynamics,
    Pbar,
    Absorption,
}

impl Command {
    pub const ALL: [Command; 5] =
        [Command::Spectrum, Command::ThetaF, Command::Dynamics, Command::Pbar, Command::Absorption];

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::ThetaF => "theta-f",
            Command::Dynamics => "dynamics",
            Command::Pbar => "pbar",
            Command::Absorption => "absorption",
        }
    }

    /// Column documentation printed by `--schema`.
    pub fn schema(self) -> &'static str {
        match self {
            Command::Spectrum => {
                "E0_kV_cm: static field strength\n\
                 M: lab-frame projection of the block\n\
                 xi: 1-based level index within the block, ascending energy\n\
                 energy_MHz: Stark-shifted rotational energy divided by h\n"
            }
            Command::ThetaF => {
                "E0_kV_cm: static field strength\n\
                 theta_f_L_rad: forbidden polarization angle, left-handed, in (-pi, pi]\n\
                 theta_f_R_rad: forbidden polarization angle, right-handed, in (-pi, pi]\n\
                 D: degree of enantiospecificity sin^2((theta_f_L - theta_f_R)/2)\n\
                 `undefined` marks points where a cascade transition dipole vanishes\n"
            }
            Command::Dynamics => {
                "t_us: time in microseconds\n\
                 P_gamma_L: population of |gamma> for the left-handed molecule\n\
                 P_gamma_R: population of |gamma> for the right-handed molecule\n"
            }
            Command::Pbar => {
                "theta_rad: beam-2 polarization angle\n\
                 Pbar_gamma_L: infinite-time average of P_gamma, left-handed\n\
                 Pbar_gamma_R: infinite-time average of P_gamma, right-handed\n"
            }
            Command::Absorption => {
                "theta_rad: beam-2 polarization angle\n\
                 A_L: steady-state beam-2 absorption Im Tr(rho d+)/(Omega2/2), left-handed\n\
                 A_R: same for the right-handed molecule\n"
            }
        }
    }

    pub fn run(self, cfg: &RunConfig) -> Result<String> {
        match self {
            Command::Spectrum => cmd_spectrum(cfg),
            Command::ThetaF => cmd_theta_f(cfg),
            Command::Dynamics => cmd_dynamics(cfg),
            Command::Pbar => cmd_pbar(cfg),
            Command::Absorption => cmd_absorption(cfg),
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::arg(format!("unknown command `{s}`")))
    }
}

/// 12 significant digits, no negative zero.
pub fn fmt_num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| UNDEFINED.to_string(), fmt_num)
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn resolve_cascade_j_max(cfg: &RunConfig, mol: &MoleculeSpec, e0_max: f64, levels: usize) -> Result<u32> {
    match cfg.j_max {
        JMax::Fixed(n) => Ok(n),
        JMax::Auto => {
            let j = converge_cascade_j_max(mol, e0_max, levels, cfg.rel_tol)?;
            log::info!("J_max = {j} (auto, E0 = {e0_max} kV/cm, {levels} levels)");
            Ok(j)
        }
    }
}

/// Left-handed forbidden angle used by the four-level commands.
pub fn resolve_theta_f(cfg: &RunConfig) -> Result<f64> {
    match cfg.theta_f {
        ThetaF::Value(v) => Ok(v),
        ThetaF::Auto => {
            let mol = cfg.molecule()?;
            let triple = cfg.triple()?;
            let e0 = cfg.e0.ok_or_else(|| Error::MissingKey("field.E0_kV_cm".into()))?;
            let j_max = resolve_cascade_j_max(cfg, &mol, e0, triple.max_level())?;
            Ok(coupling_coefficients(&mol, e0, &triple, j_max)?.theta_f)
        }
    }
}

/// Rows (E0, M, xi, energy) for the lowest `spectrum.levels` of each block.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<String> {
    let mol = cfg.molecule()?;
    let grid = cfg.field_points()?;
    if cfg.levels == 0 {
        return Err(Error::arg("spectrum.levels must be at least 1"));
    }
    if cfg.m_values.is_empty() {
        return Err(Error::arg("spectrum.M lists no blocks"));
    }
    let e0_max = max_of(&grid);
    let j_max: Vec<u32> = cfg
        .m_values
        .iter()
        .map(|&m| match cfg.j_max {
            JMax::Fixed(n) => Ok(n),
            JMax::Auto => converge_j_max(&mol, e0_max, m, cfg.levels, cfg.rel_tol),
        })
        .collect::<Result<_>>()?;

    let blocks: Vec<String> = grid
        .par_iter()
        .map(|&e0| {
            let mut out = String::new();
            for (&m, &j) in cfg.m_values.iter().zip(&j_max) {
                let sys = diagonalize_block(&mol, e0, m, j)?;
                for (i, e) in sys.energies.iter().take(cfg.levels).enumerate() {
                    out.push_str(&format!("{},{},{},{}\n", fmt_num(e0), m, i + 1, fmt_num(*e)));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(format!("E0_kV_cm,M,xi,energy_MHz\n{}", blocks.concat()))
}

/// Rows (E0, theta_f^L, theta_f^R, D) over the field grid.
pub fn cmd_theta_f(cfg: &RunConfig) -> Result<String> {
    let mol = cfg.molecule()?;
    let triple = cfg.triple()?;
    let grid = cfg.field_points()?;
    let j_max = resolve_cascade_j_max(cfg, &mol, max_of(&grid), triple.max_level())?;
    let rows = sweep_field(&mol, &triple, &grid, j_max)?;
    let mut out = String::from("E0_kV_cm,theta_f_L_rad,theta_f_R_rad,D\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_num(r.e0_kv_cm),
            fmt_opt(r.theta_f_left),
            fmt_opt(r.theta_f_right),
            fmt_opt(r.degree)
        ));
    }
    Ok(out)
}

/// Rows (t, P_gamma^L, P_gamma^R) from |alpha> over [0, t_max].
pub fn cmd_dynamics(cfg: &RunConfig) -> Result<String> {
    if !(cfg.t_max_us >= 0.0) || cfg.t_points < 2 {
        return Err(Error::arg("dynamics needs t_max_us >= 0 and at least 2 time points"));
    }
    let left = cfg.drive(resolve_theta_f(cfg)?)?;
    let right = left.mirrored();
    let n = cfg.t_points;
    let times: Vec<f64> = (0..n).map(|i| cfg.t_max_us * i as f64 / (n - 1) as f64).collect();
    let psi0 = FourLevelState::ground();
    let pl = evolve(&left, &psi0, &times)?;
    let pr = evolve(&right, &psi0, &times)?;
    let mut out = String::from("t_us,P_gamma_L,P_gamma_R\n");
    for ((t, l), r) in times.iter().zip(&pl).zip(&pr) {
        out.push_str(&format!("{},{},{}\n", fmt_num(*t), fmt_num(l.p_gamma()), fmt_num(r.p_gamma())));
    }
    Ok(out)
}

fn theta_points(cfg: &RunConfig) -> Result<Vec<f64>> {
    let p = cfg.theta_grid.points();
    if p.is_empty() {
        return Err(Error::arg("drive.theta_grid has no points"));
    }
    Ok(p)
}

/// Rows (theta, Pbar_gamma^L, Pbar_gamma^R).
pub fn cmd_pbar(cfg: &RunConfig) -> Result<String> {
    let left = cfg.drive(resolve_theta_f(cfg)?)?;
    let right = left.mirrored();
    let psi0 = FourLevelState::ground();
    let rows: Vec<String> = theta_points(cfg)?
        .par_iter()
        .map(|&th| {
            let l = time_averaged_p_gamma(&left.with_theta(th), &psi0)?;
            let r = time_averaged_p_gamma(&right.with_theta(th), &psi0)?;
            Ok(format!("{},{},{}\n", fmt_num(th), fmt_num(l), fmt_num(r)))
        })
        .collect::<Result<_>>()?;
    Ok(format!("theta_rad,Pbar_gamma_L,Pbar_gamma_R\n{}", rows.concat()))
}

/// Rows (theta, A_L, A_R) with the probe at `absorption.Omega2_MHz`.
pub fn cmd_absorption(cfg: &RunConfig) -> Result<String> {
    let decay = cfg.decay()?;
    if decay.kappa == 0.0 {
        return Err(Error::arg("steady state requires dissipation: decay.kappa_MHz must be > 0"));
    }
    let mut template = cfg.drive(resolve_theta_f(cfg)?)?;
    template.omega2 = cfg.probe_omega2;
    let rows = absorption_sweep(&template, &decay, &theta_points(cfg)?)?;
    let mut out = String::from("theta_rad,A_L,A_R\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", fmt_num(r.theta), fmt_num(r.left), fmt_num(r.right)));
    }
    Ok(out)
}

/// Write `text` to `path` via a sibling temporary file, so a failure never
/// leaves a partial file behind.
pub fn write_atomically(path: &Path, text: &str) -> Result<()> {
    use std::io::Write;
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| Error::Io(format!("cannot create temporary file in {}: {e}", dir.display())))?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path).map_err(|e| Error::Io(format!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}
