//! Sampled `sup |Ê_λ|` along a lacunary sequence in `d = 4`, with a log-log
//! slope fit for each main-term normalization.

use std::time::Instant;

use lacunary::harness::fit_slope;
use lacunary::lattice::make_lacunary;
use lacunary::multiplier::{error_sup_sample, MainNormalization, SampleStrategy};

fn main() -> lacunary::Result<()> {
    let count: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(13);
    let seq = make_lacunary(4, 1, count)?;
    for normalization in [
        MainNormalization::SingularSeries,
        MainNormalization::CountRatio,
        MainNormalization::Literal,
    ] {
        let strategy = SampleStrategy {
            normalization,
            ..SampleStrategy::default()
        };
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        println!("{normalization:?}");
        for &lambda in seq.radii() {
            let start = Instant::now();
            let s = error_sup_sample(4, lambda, &strategy)?;
            println!(
                "  λ = {lambda:>6}  sup|Ê| ≥ {:.6e}  at {:?}  ({:.1}s)",
                s.value,
                s.argmax.coords(),
                start.elapsed().as_secs_f64()
            );
            xs.push(lambda as f64);
            ys.push(s.value);
        }
        println!("  slope {:.4} (prediction -0.25)", fit_slope(&xs, &ys)?.slope);
    }
    Ok(())
}
