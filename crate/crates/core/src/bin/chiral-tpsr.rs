use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use chiral_tpsr::cli::{write_atomically, Command};
use chiral_tpsr::config::{JMax, MoleculeSource, RunConfig};
use chiral_tpsr::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Sub {
    Spectrum,
    ThetaF,
    Dynamics,
    Pbar,
    Absorption,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::Spectrum => Command::Spectrum,
            Sub::ThetaF => Command::ThetaF,
            Sub::Dynamics => Command::Dynamics,
            Sub::Pbar => Command::Pbar,
            Sub::Absorption => Command::Absorption,
        }
    }
}

/// Stark spectra, forbidden polarization angles and cascade dynamics of
/// chiral asymmetric-top molecules. Writes CSV.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    #[arg(value_enum)]
    command: Sub,
    /// Configuration file (flat `section.key = value` text).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output CSV path; stdout when neither this nor output.path is set.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Describe the CSV columns of the command and exit.
    #[arg(long)]
    schema: bool,
    /// Molecule preset, overriding the config.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Basis truncation, N or `auto`.
    #[arg(long, value_name = "N|auto")]
    jmax: Option<String>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    print_config: bool,
}

fn run(args: &Args) -> Result<(), Error> {
    let command = Command::from(args.command);
    if args.schema {
        print!("{}", command.schema());
        return Ok(());
    }
    let mut cfg = match &args.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(p) = &args.preset {
        cfg.molecule = Some(MoleculeSource::Preset(p.clone()));
    }
    if let Some(j) = &args.jmax {
        cfg.j_max = j.parse::<JMax>()?;
    }
    if let Some(o) = &args.out {
        cfg.output = Some(o.clone());
    }
    if args.print_config {
        print!("{}", cfg.to_text());
        return Ok(());
    }
    let csv = command.run(&cfg)?;
    match &cfg.output {
        Some(path) => write_atomically(path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
