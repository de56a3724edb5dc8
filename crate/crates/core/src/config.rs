//! Run configuration: flat `section.key = value` text.
//!
//! ```text
//! # propanediol cascade, field sweep
//! molecule.preset = propanediol-1,2
//! triple.alpha = 1
//! triple.beta = 1
//! triple.gamma = 4
//! field.E0_grid_kV_cm = 0:20:41
//! drive.theta = 90 deg
//! basis.J_max = auto
//! ```
//!
//! Angles carry a `deg` or `rad` suffix and are held in radians. Grids are
//! either `start:stop:count` (inclusive, evenly spaced) or a comma list.
//! Unset drive, decay and time keys fall back to the reference cascade
//! values of [`BeamDrive::reference`].

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::dynamics::BeamDrive;
use crate::error::{Error, Result};
use crate::lindblad::DecayModel;
use crate::rotor::{Handedness, MoleculeSpec};
use crate::selection::TransitionTriple;

/// Evenly spaced or explicit sample points.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Linspace { start: f64, stop: f64, count: usize },
    List(Vec<f64>),
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::Linspace { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect(),
            },
            Grid::List(v) => v.clone(),
        }
    }

    fn scaled(self, f: impl Fn(f64) -> f64) -> Self {
        match self {
            Grid::Linspace { start, stop, count } => Grid::Linspace { start: f(start), stop: f(stop), count },
            Grid::List(v) => Grid::List(v.into_iter().map(f).collect()),
        }
    }

    fn parse(text: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        match parts.len() {
            1 => {
                let v = text.split(',').map(|s| parse_f64(s.trim())).collect::<std::result::Result<Vec<_>, _>>()?;
                Ok(Grid::List(v))
            }
            3 => {
                let count = parts[2]
                    .parse::<usize>()
                    .map_err(|_| format!("grid count `{}` is not a non-negative integer", parts[2]))?;
                Ok(Grid::Linspace { start: parse_f64(parts[0])?, stop: parse_f64(parts[1])?, count })
            }
            _ => Err(format!("grid `{text}` is neither start:stop:count nor a comma list")),
        }
    }

    fn render(&self) -> String {
        match self {
            Grid::Linspace { start, stop, count } => format!("{start}:{stop}:{count}"),
            Grid::List(v) => v.iter().map(f64::to_string).collect::<Vec<_>>().join(", "),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JMax {
    Auto,
    Fixed(u32),
}

impl FromStr for JMax {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(JMax::Auto);
        }
        s.parse::<u32>()
            .map(JMax::Fixed)
            .map_err(|_| Error::arg(format!("J_max must be a non-negative integer or `auto`, got `{s}`")))
    }
}

impl std::fmt::Display for JMax {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            JMax::Auto => f.write_str("auto"),
            JMax::Fixed(n) => write!(f, "{n}"),
        }
    }
}

/// Where the rotational constants come from.
#[derive(Debug, Clone, PartialEq)]
pub enum MoleculeSource {
    Preset(String),
    Inline { name: String, rotational_mhz: [f64; 3], dipole_debye: [f64; 3] },
}

impl MoleculeSource {
    /// Left-handed molecule; the commands build the mirror image themselves.
    pub fn build(&self) -> Result<MoleculeSpec> {
        match self {
            MoleculeSource::Preset(name) => MoleculeSpec::preset(name, Handedness::Left),
            MoleculeSource::Inline { name, rotational_mhz, dipole_debye } => {
                MoleculeSpec::new(name, *rotational_mhz, *dipole_debye, Handedness::Left)
            }
        }
    }
}

/// Forbidden angle fed to the four-level models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaF {
    /// Left-handed value in radians; the right-handed one is its negative.
    Value(f64),
    /// Computed from the molecule, triple and `field.E0_kV_cm`.
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub molecule: Option<MoleculeSource>,
    pub triple: Option<TransitionTriple>,
    pub e0: Option<f64>,
    pub e0_grid: Option<Grid>,
    pub m_values: Vec<i32>,
    pub levels: usize,
    pub j_max: JMax,
    pub rel_tol: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub theta: f64,
    pub theta_grid: Grid,
    pub theta_f: ThetaF,
    pub t_max_us: f64,
    pub t_points: usize,
    pub probe_omega2: f64,
    pub kappa: f64,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let d = BeamDrive::reference(std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2);
        Self {
            molecule: None,
            triple: None,
            e0: None,
            e0_grid: None,
            m_values: vec![-1, 0, 1],
            levels: 6,
            j_max: JMax::Auto,
            rel_tol: 1e-10,
            omega1: d.omega1,
            omega2: d.omega2,
            delta1: d.delta1,
            delta2: d.delta2,
            theta: d.theta,
            theta_grid: Grid::Linspace { start: -180f64.to_radians(), stop: 180f64.to_radians(), count: 361 },
            theta_f: ThetaF::Value(d.theta_f),
            t_max_us: 10.0,
            t_points: 1001,
            probe_omega2: 0.1,
            kappa: DecayModel::default().kappa,
            output: None,
        }
    }
}

/// Every recognised key, in serialization order.
pub const KEYS: &[&str] = &[
    "molecule.preset",
    "molecule.name",
    "molecule.A_MHz",
    "molecule.B_MHz",
    "molecule.C_MHz",
    "molecule.d_a_D",
    "molecule.d_b_D",
    "molecule.d_c_D",
    "triple.alpha",
    "triple.beta",
    "triple.gamma",
    "field.E0_kV_cm",
    "field.E0_grid_kV_cm",
    "spectrum.M",
    "spectrum.levels",
    "basis.J_max",
    "basis.rel_tol",
    "drive.Omega1_MHz",
    "drive.Omega2_MHz",
    "drive.Delta1_MHz",
    "drive.Delta2_MHz",
    "drive.theta",
    "drive.theta_grid",
    "drive.theta_f",
    "dynamics.t_max_us",
    "dynamics.t_points",
    "absorption.Omega2_MHz",
    "decay.kappa_MHz",
    "output.path",
];

const INLINE_KEYS: [&str; 6] =
    ["molecule.A_MHz", "molecule.B_MHz", "molecule.C_MHz", "molecule.d_a_D", "molecule.d_b_D", "molecule.d_c_D"];

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    let v = s.parse::<f64>().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

type ToRadians = fn(f64) -> f64;

/// Split `value unit` into the value text and its conversion to radians.
fn split_angle(text: &str) -> std::result::Result<(&str, ToRadians), String> {
    let text = text.trim();
    if let Some(v) = text.strip_suffix("deg") {
        Ok((v.trim(), f64::to_radians))
    } else if let Some(v) = text.strip_suffix("rad") {
        Ok((v.trim(), |x| x))
    } else {
        Err(format!("angle `{text}` needs a `deg` or `rad` unit suffix"))
    }
}

fn parse_angle(text: &str) -> std::result::Result<f64, String> {
    let (v, conv) = split_angle(text)?;
    Ok(conv(parse_f64(v)?))
}

fn parse_angle_grid(text: &str) -> std::result::Result<Grid, String> {
    let (v, conv) = split_angle(text)?;
    Ok(Grid::parse(v)?.scaled(conv))
}

fn parse_count(s: &str) -> std::result::Result<usize, String> {
    s.parse::<usize>().map_err(|_| format!("`{s}` is not a non-negative integer"))
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<&str> = Vec::new();
        let mut inline: [Option<f64>; 6] = [None; 6];
        let mut inline_name: Option<String> = None;
        let mut preset: Option<String> = None;
        let mut triple: [Option<usize>; 3] = [None; 3];
        let mut first_molecule_line = 0;
        let mut triple_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| Error::Config { line, message };
            let (key, value) =
                content.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(err(format!("unknown key `{key}`")));
            };
            if seen.contains(&known) {
                return Err(err(format!("duplicate key `{key}`")));
            }
            seen.push(known);
            let ctx = |m: String| err(format!("{key}: {m}"));

            if key.starts_with("molecule.") && first_molecule_line == 0 {
                first_molecule_line = line;
            }
            match key {
                "molecule.preset" => preset = Some(value.to_string()),
                "molecule.name" => inline_name = Some(value.to_string()),
                k if INLINE_KEYS.contains(&k) => {
                    let i = INLINE_KEYS.iter().position(|x| *x == k).expect("listed");
                    inline[i] = Some(parse_f64(value).map_err(ctx)?);
                }
                "triple.alpha" | "triple.beta" | "triple.gamma" => {
                    let i =
                        ["triple.alpha", "triple.beta", "triple.gamma"].iter().position(|x| *x == key).expect("listed");
                    triple[i] = Some(parse_count(value).map_err(ctx)?);
                    triple_line = line;
                }
                "field.E0_kV_cm" => cfg.e0 = Some(parse_f64(value).map_err(ctx)?),
                "field.E0_grid_kV_cm" => cfg.e0_grid = Some(Grid::parse(value).map_err(ctx)?),
                "spectrum.M" => {
                    cfg.m_values = value
                        .split(',')
                        .map(|s| s.trim().parse::<i32>().map_err(|_| format!("`{}` is not an integer", s.trim())))
                        .collect::<std::result::Result<_, _>>()
                        .map_err(ctx)?
                }
                "spectrum.levels" => cfg.levels = parse_count(value).map_err(ctx)?,
                "basis.J_max" => cfg.j_max = value.parse().map_err(|e: Error| ctx(e.to_string()))?,
                "basis.rel_tol" => cfg.rel_tol = parse_f64(value).map_err(ctx)?,
                "drive.Omega1_MHz" => cfg.omega1 = parse_f64(value).map_err(ctx)?,
                "drive.Omega2_MHz" => cfg.omega2 = parse_f64(value).map_err(ctx)?,
                "drive.Delta1_MHz" => cfg.delta1 = parse_f64(value).map_err(ctx)?,
                "drive.Delta2_MHz" => cfg.delta2 = parse_f64(value).map_err(ctx)?,
                "drive.theta" => cfg.theta = parse_angle(value).map_err(ctx)?,
                "drive.theta_grid" => cfg.theta_grid = parse_angle_grid(value).map_err(ctx)?,
                "drive.theta_f" => {
                    cfg.theta_f = if value.eq_ignore_ascii_case("auto") {
                        ThetaF::Auto
                    } else {
                        ThetaF::Value(parse_angle(value).map_err(ctx)?)
                    }
                }
                "dynamics.t_max_us" => cfg.t_max_us = parse_f64(value).map_err(ctx)?,
                "dynamics.t_points" => cfg.t_points = parse_count(value).map_err(ctx)?,
                "absorption.Omega2_MHz" => cfg.probe_omega2 = parse_f64(value).map_err(ctx)?,
                "decay.kappa_MHz" => cfg.kappa = parse_f64(value).map_err(ctx)?,
                "output.path" => cfg.output = Some(PathBuf::from(value)),
                _ => unreachable!("key list and match arms disagree on `{key}`"),
            }
        }

        let any_inline = inline.iter().any(Option::is_some) || inline_name.is_some();
        cfg.molecule = match (preset, any_inline) {
            (Some(_), true) => {
                return Err(Error::Config {
                    line: first_molecule_line,
                    message: "give either molecule.preset or inline molecule constants, not both".into(),
                })
            }
            (Some(name), false) => Some(MoleculeSource::Preset(name)),
            (None, true) => {
                if let Some(i) = inline.iter().position(Option::is_none) {
                    return Err(Error::MissingKey(INLINE_KEYS[i].to_string()));
                }
                let v: Vec<f64> = inline.iter().map(|x| x.expect("checked")).collect();
                Some(MoleculeSource::Inline {
                    name: inline_name.unwrap_or_else(|| "custom".to_string()),
                    rotational_mhz: [v[0], v[1], v[2]],
                    dipole_debye: [v[3], v[4], v[5]],
                })
            }
            (None, false) => None,
        };

        cfg.triple = match triple {
            [None, None, None] => None,
            [Some(a), Some(b), Some(g)] => Some(
                TransitionTriple::new(a, b, g)
                    .map_err(|e| Error::Config { line: triple_line, message: e.to_string() })?,
            ),
            _ => {
                let names = ["triple.alpha", "triple.beta", "triple.gamma"];
                let i = triple.iter().position(Option::is_none).expect("partially set");
                return Err(Error::MissingKey(names[i].to_string()));
            }
        };
        Ok(cfg)
    }

    /// Text form that parses back to an identical configuration.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        match &self.molecule {
            Some(MoleculeSource::Preset(name)) => put("molecule.preset", name.clone()),
            Some(MoleculeSource::Inline { name, rotational_mhz, dipole_debye }) => {
                put("molecule.name", name.clone());
                for (k, v) in INLINE_KEYS.iter().zip(rotational_mhz.iter().chain(dipole_debye)) {
                    put(k, v.to_string());
                }
            }
            None => {}
        }
        if let Some(t) = &self.triple {
            put("triple.alpha", t.alpha.to_string());
            put("triple.beta", t.beta.to_string());
            put("triple.gamma", t.gamma.to_string());
        }
        if let Some(e0) = self.e0 {
            put("field.E0_kV_cm", e0.to_string());
        }
        if let Some(g) = &self.e0_grid {
            put("field.E0_grid_kV_cm", g.render());
        }
        put("spectrum.M", self.m_values.iter().map(i32::to_string).collect::<Vec<_>>().join(", "));
        put("spectrum.levels", self.levels.to_string());
        put("basis.J_max", self.j_max.to_string());
        put("basis.rel_tol", self.rel_tol.to_string());
        put("drive.Omega1_MHz", self.omega1.to_string());
        put("drive.Omega2_MHz", self.omega2.to_string());
        put("drive.Delta1_MHz", self.delta1.to_string());
        put("drive.Delta2_MHz", self.delta2.to_string());
        put("drive.theta", format!("{} rad", self.theta));
        put("drive.theta_grid", format!("{} rad", self.theta_grid.render()));
        put(
            "drive.theta_f",
            match self.theta_f {
                ThetaF::Value(v) => format!("{v} rad"),
                ThetaF::Auto => "auto".into(),
            },
        );
        put("dynamics.t_max_us", self.t_max_us.to_string());
        put("dynamics.t_points", self.t_points.to_string());
        put("absorption.Omega2_MHz", self.probe_omega2.to_string());
        put("decay.kappa_MHz", self.kappa.to_string());
        if let Some(p) = &self.output {
            put("output.path", p.display().to_string());
        }
        s
    }

    pub fn molecule(&self) -> Result<MoleculeSpec> {
        self.molecule
            .as_ref()
            .ok_or_else(|| Error::MissingKey("molecule.preset (or inline molecule.A_MHz ...)".into()))?
            .build()
    }

    pub fn triple(&self) -> Result<TransitionTriple> {
        self.triple.ok_or_else(|| Error::MissingKey("triple.alpha".into()))
    }

    /// Field points: the single `field.E0_kV_cm` or the grid, never both.
    pub fn field_points(&self) -> Result<Vec<f64>> {
        match (&self.e0, &self.e0_grid) {
            (Some(_), Some(_)) => Err(Error::arg("set only one of field.E0_kV_cm and field.E0_grid_kV_cm")),
            (Some(e0), None) => Ok(vec![*e0]),
            (None, Some(g)) => {
                let p = g.points();
                if p.is_empty() {
                    return Err(Error::arg("field.E0_grid_kV_cm has no points"));
                }
                Ok(p)
            }
            (None, None) => Err(Error::MissingKey("field.E0_kV_cm (or field.E0_grid_kV_cm)".into())),
        }
    }

    /// Drive for the left-handed enantiomer with an explicit forbidden angle.
    pub fn drive(&self, theta_f: f64) -> Result<BeamDrive> {
        let d = BeamDrive {
            omega1: self.omega1,
            omega2: self.omega2,
            delta1: self.delta1,
            delta2: self.delta2,
            theta: self.theta,
            theta_f,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn decay(&self) -> Result<DecayModel> {
        DecayModel::new(self.kappa)
    }
}
