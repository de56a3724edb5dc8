//! Steady-state probe absorption A(theta) with spontaneous emission.

use std::f64::consts::{FRAC_PI_2, PI};

use chiral_tpsr::dynamics::BeamDrive;
use chiral_tpsr::lindblad::{absorption_sweep, DecayModel};

fn main() -> chiral_tpsr::Result<()> {
    // weak probe, Omega2 = 0.1 MHz
    let template = BeamDrive { omega2: 0.1, ..BeamDrive::reference(0.0, FRAC_PI_2) };
    let decay = DecayModel::new(0.1)?;
    let grid: Vec<f64> = (1..=64).map(|k| -PI + 2.0 * PI * k as f64 / 64.0).collect();
    println!("theta [rad]        A_L            A_R");
    for row in absorption_sweep(&template, &decay, &grid)? {
        println!("{:11.5}   {:+.6e}   {:+.6e}", row.theta, row.left, row.right);
    }
    Ok(())
}
