//! Lowest Stark levels of 1,2-propanediol in the M = 0 and M = 1 blocks.
//!
//! Run with `cargo run --release --example stark_spectrum`.

use chiral_tpsr::rotor::{Handedness, MoleculeSpec};
use chiral_tpsr::stark::{converge_j_max, diagonalize_block};

fn main() -> chiral_tpsr::Result<()> {
    let mol = MoleculeSpec::propanediol(Handedness::Left);
    let levels = 6;
    for m in [0, 1] {
        let j_max = converge_j_max(&mol, 20.0, m, levels, 1e-10)?;
        println!("M = {m}, J_max = {j_max}");
        for e0 in [0.0, 5.0, 10.0, 20.0] {
            let sys = diagonalize_block(&mol, e0, m, j_max)?;
            let row: Vec<String> = sys.energies.iter().take(levels).map(|e| format!("{e:10.3}")).collect();
            println!("  E0 = {e0:4.1} kV/cm: {}", row.join(" "));
        }
    }

    // the mirror image has the same spectrum
    let right = mol.mirror();
    let a = diagonalize_block(&mol, 10.0, 0, 8)?;
    let b = diagonalize_block(&right, 10.0, 0, 8)?;
    let worst = a.energies.iter().zip(&b.energies).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    println!("max |E_L - E_R| at 10 kV/cm: {worst:.2e} MHz");
    Ok(())
}
