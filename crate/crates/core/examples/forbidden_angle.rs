//! Forbidden polarization angles and enantiospecificity versus field.
//!
//! Usage: `cargo run --release --example forbidden_angle -- [alpha beta gamma]`

use chiral_tpsr::rotor::{Handedness, MoleculeSpec};
use chiral_tpsr::selection::{converge_cascade_j_max, sweep_field, TransitionTriple};

fn main() -> chiral_tpsr::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let triple = match args.as_slice() {
        [a, b, g] => TransitionTriple::new(*a, *b, *g)?,
        _ => TransitionTriple::new(1, 1, 4)?,
    };
    let mol = MoleculeSpec::propanediol(Handedness::Left);
    let grid: Vec<f64> = (0..=40).map(|i| 0.5 * i as f64).collect();
    let j_max = converge_cascade_j_max(&mol, 20.0, triple.max_level(), 1e-10)?;
    println!("triple {triple:?}, J_max = {j_max}");
    println!("{:>6} {:>12} {:>12} {:>10}", "E0", "theta_f_L", "theta_f_R", "D");
    let fmt = |x: Option<f64>| x.map_or("undefined".to_string(), |v| format!("{v:.6}"));
    for row in sweep_field(&mol, &triple, &grid, j_max)? {
        println!(
            "{:6.1} {:>12} {:>12} {:>10}",
            row.e0_kv_cm,
            fmt(row.theta_f_left),
            fmt(row.theta_f_right),
            fmt(row.degree)
        );
    }
    Ok(())
}
