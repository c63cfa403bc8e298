//! `M_1 / M_2` split of `A_τ 1_F` for random sets in a `33^4` box, with the
//! norm ratios per `α`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lacunary::lattice::make_lacunary;
use lacunary::operators::{GridFunction, SplitWorkspace};

fn main() -> lacunary::Result<()> {
    let sets: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let (d, side) = (4, 33);
    let seq = make_lacunary(d, 1, 4)?;
    let mut ws = SplitWorkspace::new(d, side, seq.clone(), None)?;
    println!("radii {:?}, output side {}, FFT side {}", seq.radii(), ws.output_side(), ws.fft_side());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for s in 0..sets {
        let size = rng.gen_range(1..=64);
        let h = (side / 2) as i64;
        let points: Vec<Vec<i64>> = (0..size)
            .map(|_| (0..d).map(|_| rng.gen_range(-h..=h)).collect())
            .collect();
        let f = GridFunction::indicator(d, side, &points)?;
        let (l1, l2) = (f.lp_norm(1.0)?, f.lp_norm(2.0)?);
        for alpha in [1.0, 2.0, 3.0, 4.0] {
            let start = Instant::now();
            let p = ws.split(&f, alpha)?;
            println!(
                "set {s} |F| = {l1:>2} α = {alpha}: ‖M1‖₁/‖f‖₁ = {:.4}  ‖M2‖₂/‖f‖₂ = {:.4}  excess {:.2e}  reassembly {:.2e}  spill {:.2e}  ({:.1}s)",
                p.m1.lp_norm(1.0)? / l1,
                p.m2.lp_norm(2.0)? / l2,
                p.domination_excess,
                p.reassembly_error,
                p.spill,
                start.elapsed().as_secs_f64()
            );
        }
    }
    Ok(())
}
