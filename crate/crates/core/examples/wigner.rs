//! A few 3-j symbols and the orthogonality sum they satisfy.

use chiral_tpsr::angular::wigner_3j;

fn main() -> chiral_tpsr::Result<()> {
    for (j1, j2, j3, m1, m2, m3) in
        [(1, 1, 0, 1, -1, 0), (1, 1, 2, 0, 0, 0), (2, 1, 1, 1, -1, 0), (10, 10, 10, 0, 0, 0)]
    {
        println!("({j1} {j2} {j3}; {m1} {m2} {m3}) = {:+.15}", wigner_3j(j1, j2, j3, m1, m2, m3)?);
    }

    // (2 j3 + 1) sum_{m1} 3j(m1, -m1 - m3, m3)^2 = 1 for every allowed j3
    let (j1, j2, m3) = (3, 2, 1);
    for j3 in 1..=5 {
        let mut s = 0.0;
        for m1 in -j1..=j1 {
            s += wigner_3j(j1, j2, j3, m1, -m1 - m3, m3)?.powi(2);
        }
        println!("j3 = {j3}: (2 j3 + 1) * sum = {:.15}", (2 * j3 + 1) as f64 * s);
    }
    Ok(())
}
