//! Kloosterman-type sums `K(λ, q, l)`: the factored evaluation against the
//! direct sum, `Σ_q |K(λ, q, 0)|` over a λ window, and `sup_l |K|`.

use lacunary::arith::rho;
use lacunary::expsum::{
    kloosterman_bruteforce, kloosterman_factored, kloosterman_sup, rho_weighted_sum, KloostermanParams, LStrategy,
    QSumSweep,
};

fn main() -> lacunary::Result<()> {
    for (lambda, q, l) in [(1u64, 3u64, vec![0i64; 4]), (5, 4, vec![1, 0, 0, 0]), (17, 12, vec![3, 1, 4, 1])] {
        let p = KloostermanParams::new(lambda, q, &l)?;
        let (fast, brute) = (kloosterman_factored(&p)?, kloosterman_bruteforce(&p)?);
        println!("K({lambda}, {q}, {l:?}) = {:.6} (direct {:.6})", fast.re, brute.re);
    }

    let sweep = QSumSweep::new(4, 10_000)?;
    for lambda in [101u64, 1001, 5003, 9999] {
        println!(
            "λ = {lambda:>5}: Σ_q |K(λ,q,0)| = {:.4}, random l: {:.4}",
            sweep.q_sum(lambda, LStrategy::Zero)?,
            sweep.q_sum(lambda, LStrategy::Random { seed: 1 })?
        );
    }

    for q in [2u64, 3, 5, 8, 9, 16] {
        let s = kloosterman_sup(4, 7, q, 256, 1)?;
        let scale = (q as f64).powf(-1.5) * (rho(q, 7) as f64).sqrt();
        println!("q = {q:>2}: sup_l |K(7,q,l)| = {:.5} ({}), q^{{-3/2}}ρ^{{1/2}} = {scale:.5}", s.value, if s.exact { "exact" } else { "sampled" });
    }

    for beta in [0.0, -1.5] {
        println!("Σ_q q^{beta} ρ^{{1/2}} at λ = 10^6: {:.4}", rho_weighted_sum(beta, 1_000_000)?);
    }
    Ok(())
}
