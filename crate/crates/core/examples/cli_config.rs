//! Drive the CSV commands from a config string, as the binary does.

use chiral_tpsr::cli::Command;
use chiral_tpsr::config::RunConfig;

const CONFIG: &str = "
molecule.preset = propanediol-1,2
triple.alpha = 1
triple.beta = 3
triple.gamma = 2
field.E0_grid_kV_cm = 0:20:5
drive.theta_grid = -180:180:9 deg
";

fn main() -> chiral_tpsr::Result<()> {
    let cfg = RunConfig::parse(CONFIG)?;
    for cmd in [Command::ThetaF, Command::Pbar] {
        println!("# {}", cmd.name());
        print!("{}", cmd.run(&cfg)?);
    }
    println!("# effective configuration");
    print!("{}", cfg.to_text());
    Ok(())
}
