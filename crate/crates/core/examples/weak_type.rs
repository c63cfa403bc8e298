//! Restricted weak-type ratios `β |{M 1_F > β}|^{(d-1)/(d+1)} / |F|^{(d-1)/(d+1)}`
//! for random sets and for a single point, on growing boxes.

use lacunary::harness::experiments::random_set;
use lacunary::lattice::make_lacunary;
use lacunary::operators::exponents::{weak_exponent, weak_type_scan_points};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> lacunary::Result<()> {
    let d = 4;
    let seq = make_lacunary(d, 1, 4)?;
    println!("sequence {:?}, exponent (d-1)/(d+1) = {}", seq.radii(), weak_exponent(d));
    let single = weak_type_scan_points(d, &[vec![0; d]], &seq)?;
    println!("single point: max ratio {:.5} at β = {:.5}", single.max_ratio, single.beta_at_max);
    for side in [17usize, 33, 65, 129] {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut best = 0.0f64;
        for _ in 0..20 {
            let pts = random_set(&mut rng, d, side, 64);
            best = best.max(weak_type_scan_points(d, &pts, &seq)?.max_ratio);
        }
        println!("side {side:>3}: max ratio over 20 sets {best:.5}");
    }
    Ok(())
}
