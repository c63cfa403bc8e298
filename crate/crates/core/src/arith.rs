//! Elementary number theory used by the exponential sums.
//!
//! Everything here works on machine integers with trial-division
//! factorization; moduli in scope stay far below `10^6`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};

/// A residue class `value mod modulus`, always stored reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Reduces `value` into `[0, modulus)`.
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::invalid("residue modulus must be positive"));
        }
        let value = value.rem_euclid(modulus as i64) as u64;
        Ok(Residue { value, modulus })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }
}

/// The additive character `e(t) = exp(2πi t)`.
#[inline]
pub fn e(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * t)
}

/// Table of `e(k/q)` for `k = 0..q`, so integer phases reduced mod `q`
/// index straight into it.
#[derive(Debug, Clone)]
pub struct RootsOfUnity {
    q: u64,
    table: Vec<Complex64>,
}

impl RootsOfUnity {
    pub fn new(q: u64) -> Self {
        assert!(q >= 1, "modulus must be positive");
        let table = (0..q)
            .map(|k| {
                // exact values at the quarter turns keep Gauss sums clean
                match (4 * k).checked_rem(q) {
                    Some(0) => match 4 * k / q {
                        0 => Complex64::new(1.0, 0.0),
                        1 => Complex64::new(0.0, 1.0),
                        2 => Complex64::new(-1.0, 0.0),
                        _ => Complex64::new(0.0, -1.0),
                    },
                    _ => e(k as f64 / q as f64),
                }
            })
            .collect();
        RootsOfUnity { q, table }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// `e(k/q)` for an arbitrary integer phase `k`.
    #[inline]
    pub fn at(&self, k: i64) -> Complex64 {
        self.table[k.rem_euclid(self.q as i64) as usize]
    }

    /// `e(k/q)` for a phase already reduced into `[0, q)`.
    #[inline]
    pub fn at_reduced(&self, k: u64) -> Complex64 {
        self.table[k as usize]
    }
}

/// Prime factorization as `(prime, exponent)` pairs in ascending order.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::invalid("cannot factorize 0"));
    }
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?
        .into_iter()
        .map(|(p, k)| (p - 1) * p.pow(k - 1))
        .product())
}

pub fn moebius(n: u64) -> Result<i64> {
    let f = factorize(n)?;
    if f.iter().any(|&(_, k)| k > 1) {
        Ok(0)
    } else if f.len() % 2 == 0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let mut divs = vec![1u64];
    for (p, k) in factorize(n)? {
        let current = divs.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            for i in 0..current {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

/// Reduced residues mod `q`, ascending. `U_1` is taken to be `{0}`.
pub fn units(q: u64) -> Result<Vec<Residue>> {
    if q == 0 {
        return Err(Error::invalid("units: modulus must be positive"));
    }
    if q == 1 {
        return Ok(vec![Residue { value: 0, modulus: 1 }]);
    }
    Ok((1..q)
        .filter(|a| a.gcd(&q) == 1)
        .map(|value| Residue { value, modulus: q })
        .collect())
}

/// Raw values of [`units`], for hot loops.
pub(crate) fn unit_values(q: u64) -> Vec<u64> {
    if q == 1 {
        vec![0]
    } else {
        (1..q).filter(|a| a.gcd(&q) == 1).collect()
    }
}

/// `ρ(q, λ) = gcd(q₁, λ)·2^r` where `q = q₁·2^r` with `q₁` odd.
pub fn rho(q: u64, lambda: u64) -> u64 {
    assert!(q >= 1 && lambda >= 1, "rho requires q, λ ≥ 1");
    let r = q.trailing_zeros();
    let odd = q >> r;
    odd.gcd(&lambda) << r
}

/// Ramanujan sum `c_q(n) = Σ_{a ∈ U_q} e(an/q)` via `μ(q/g)·φ(q)/φ(q/g)`,
/// `g = gcd(q, n)`.
pub fn ramanujan_sum(q: u64, n: i64) -> i64 {
    assert!(q >= 1, "ramanujan_sum requires q ≥ 1");
    let n = n.rem_euclid(q as i64) as u64;
    let g = q.gcd(&n); // gcd(q, 0) = q
    let m = q / g;
    let mu = moebius(m).expect("m ≥ 1");
    if mu == 0 {
        return 0;
    }
    let phi_q = euler_phi(q).expect("q ≥ 1");
    let phi_m = euler_phi(m).expect("m ≥ 1");
    mu * (phi_q / phi_m) as i64
}

/// Generalized quadratic Gauss sum `g(a, b; q) = Σ_{x mod q} e((a x² + b x)/q)`
/// by direct summation.
pub fn gauss_sum(a: i64, b: i64, q: u64) -> Complex64 {
    assert!(q >= 1, "gauss_sum requires q ≥ 1");
    gauss_sum_with(&RootsOfUnity::new(q), a, b)
}

pub(crate) fn gauss_sum_with(roots: &RootsOfUnity, a: i64, b: i64) -> Complex64 {
    let q = roots.modulus();
    let a = a.rem_euclid(q as i64) as u64;
    let b = b.rem_euclid(q as i64) as u64;
    // phase(x) = a x² + b x mod q, advanced incrementally:
    // phase(x+1) - phase(x) = a(2x+1) + b
    let mut phase = 0u64;
    let mut step = (a + b) % q;
    let two_a = (2 * a) % q;
    let mut sum = Complex64::new(0.0, 0.0);
    for _ in 0..q {
        sum += roots.at_reduced(phase);
        phase = (phase + step) % q;
        step = (step + two_a) % q;
    }
    sum
}

/// Smallest `r ≥ 0` with `r² ≥ n`.
pub fn ceil_sqrt(n: u64) -> u64 {
    let r = n.isqrt();
    if r * r == n {
        r
    } else {
        r + 1
    }
}

/// Largest `r ≥ 0` with `r² ≤ n`.
pub fn floor_sqrt(n: u64) -> u64 {
    n.isqrt()
}
