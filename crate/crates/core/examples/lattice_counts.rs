//! Lattice points on spheres: enumeration against the convolution count,
//! Jacobi's four-square formula, and the growth `N_d(λ) ≈ λ^{d/2-1}`.

use lacunary::harness::fit_slope;
use lacunary::lattice::{count_representations, enumerate_sphere, hl_ratio, is_admissible, r4_jacobi};

fn main() -> lacunary::Result<()> {
    let shell = enumerate_sphere(4, 6)?;
    println!("|m|² = 6 in Z^4: {} points, first {:?}", shell.count(), shell.point(0));

    println!("{:>6} {:>8} {:>8} {:>8}", "λ", "N_4", "r4", "N_5");
    for lambda in [1u64, 2, 3, 4, 5, 8, 12, 25, 100, 1001] {
        println!(
            "{lambda:>6} {:>8} {:>8} {:>8}",
            count_representations(4, lambda)?,
            r4_jacobi(lambda)?,
            count_representations(5, lambda)?
        );
    }

    for d in [4usize, 5, 6] {
        let lambdas: Vec<u64> = (100..=10_000).filter(|&l| is_admissible(d, l)).collect();
        let counts = lambdas
            .iter()
            .map(|&l| count_representations(d, l).map(|n| n as f64))
            .collect::<lacunary::Result<Vec<_>>>()?;
        let xs: Vec<f64> = lambdas.iter().map(|&l| l as f64).collect();
        let fit = fit_slope(&xs, &counts)?;
        println!(
            "d = {d}: slope {:.4} (d/2 - 1 = {}), N/λ^{{d/2-1}} at 9999: {:.4}",
            fit.slope,
            d as f64 / 2.0 - 1.0,
            hl_ratio(d, 9999)?
        );
    }
    Ok(())
}
