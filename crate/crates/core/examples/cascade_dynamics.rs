//! Closed four-level cascade: P_gamma(t) at the left-handed forbidden angle
//! and the time-averaged P_gamma over the polarization angle.

use std::f64::consts::{FRAC_PI_2, PI};

use chiral_tpsr::dynamics::{evolve, time_averaged_p_gamma, BeamDrive, FourLevelState};

fn main() -> chiral_tpsr::Result<()> {
    let left = BeamDrive::reference(FRAC_PI_2, FRAC_PI_2);
    let right = left.mirrored();
    let psi0 = FourLevelState::ground();
    let times: Vec<f64> = (0..=20).map(|i| 0.5 * i as f64).collect();
    let pl = evolve(&left, &psi0, &times)?;
    let pr = evolve(&right, &psi0, &times)?;
    println!("theta = pi/2     t [us]   P_gamma L      P_gamma R");
    for ((t, l), r) in times.iter().zip(&pl).zip(&pr) {
        println!("{t:25.1}   {:.3e}   {:.6}", l.p_gamma(), r.p_gamma());
    }

    println!("\ntheta [rad]   Pbar L     Pbar R");
    for i in 0..16 {
        let theta = -PI + 2.0 * PI * (i + 1) as f64 / 16.0;
        let l = time_averaged_p_gamma(&left.with_theta(theta), &psi0)?;
        let r = time_averaged_p_gamma(&right.with_theta(theta), &psi0)?;
        println!("{theta:11.4}   {l:.6}   {r:.6}");
    }
    Ok(())
}
