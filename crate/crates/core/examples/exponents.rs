//! Exponent bookkeeping: the critical `p(d) = (d+1)/(d-1)` and the
//! interpolation exponent that vanishes there.

use lacunary::operators::exponents::{critical_p, interp_exponent, weak_type_budget};

fn main() -> lacunary::Result<()> {
    println!("{:>3} {:>10} {:>12} {:>12}", "d", "p(d)", "at p(d)", "at p = 2");
    for d in 4..=10 {
        let p = critical_p(d)?;
        println!(
            "{d:>3} {p:>10.6} {:>12.2e} {:>12.6}",
            interp_exponent(d, p)?,
            interp_exponent(d, 2.0)?
        );
    }
    let (a, b) = weak_type_budget(4, 0.3, 64.0)?;
    println!("d = 4, β = 0.3, |F| = 64: pieces {a:.6} {b:.6}, |F|^{{3/5}} = {:.6}", 64f64.powf(0.6));
    Ok(())
}
