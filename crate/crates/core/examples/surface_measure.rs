//! The continuous surface-measure transform: values along a ray and the
//! decay of its envelope against `r^{-(d-1)/2}`.

use lacunary::harness::fit_slope;
use lacunary::multiplier::{surface_ft, surface_ft_decay};

fn main() -> lacunary::Result<()> {
    for d in [3usize, 4, 5] {
        let row: Vec<String> = [0.0, 0.25, 0.5, 1.0, 2.0]
            .iter()
            .map(|&t| format!("{:+.5}", surface_ft(d, 4.0, &[t, 0.0, 0.0, 0.0, 0.0][..d])))
            .collect();
        println!("d = {d}, λ = 4, ξ = (t, 0, ...), t ∈ {{0, 1/4, 1/2, 1, 2}}: {}", row.join(" "));
    }
    let radii: Vec<f64> = (0..30).map(|i| (100f64.ln() * i as f64 / 29.0).exp()).collect();
    for d in 3..=7usize {
        let env: Vec<f64> = surface_ft_decay(d, 1.0, &radii, 4, 1).iter().map(|r| r.envelope).collect();
        println!(
            "d = {d}: envelope slope {:.4}, predicted {}",
            fit_slope(&radii, &env)?.slope,
            -(d as f64 - 1.0) / 2.0
        );
    }
    Ok(())
}
