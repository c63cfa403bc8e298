//! The Kloosterman-type sums
//!
//! ```text
//! K(λ, q, l) = q^{-d} Σ_{a ∈ U_q} Σ_{x ∈ Z_q^d} e((-λa + a|x|² + l·x)/q)
//! ```
//!
//! evaluated either by the direct double sum or through the per-coordinate
//! Gauss-sum factorization, plus the sweeps over `q` that feed the decay
//! checks.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{euler_phi, floor_sqrt, gauss_sum_with, rho, unit_values, Residue, RootsOfUnity};
use crate::error::{check_budget, Error, Result};

/// Work limit for [`kloosterman_bruteforce`], counted in `q^d + φ(q)·q²` terms.
pub const BRUTEFORCE_TERM_LIMIT: u128 = 100_000_000;
/// Work limit for [`kloosterman_factored`], counted in `q·φ(q)·d` terms.
pub const FACTORED_TERM_LIMIT: u128 = 1_000_000_000;
/// Above this many frequency vectors `kloosterman_sup` samples instead of
/// iterating every `l`.
pub const SUP_EXACT_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KloostermanParams {
    lambda: u64,
    q: u64,
    l: Vec<Residue>,
}

impl KloostermanParams {
    /// `l` gives the dimension; every entry is reduced mod `q`.
    pub fn new(lambda: u64, q: u64, l: &[i64]) -> Result<Self> {
        if q == 0 {
            return Err(Error::invalid("Kloosterman modulus must be positive"));
        }
        if l.is_empty() {
            return Err(Error::invalid("frequency vector l must be nonempty"));
        }
        let l = l
            .iter()
            .map(|&li| Residue::new(li, q))
            .collect::<Result<Vec<_>>>()?;
        Ok(KloostermanParams { lambda, q, l })
    }

    pub fn dimension(&self) -> usize {
        self.l.len()
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn l(&self) -> &[Residue] {
        &self.l
    }
}

/// Direct double sum over `a ∈ U_q` and `x ∈ Z_q^d`.
pub fn kloosterman_bruteforce(p: &KloostermanParams) -> Result<Complex64> {
    let q = p.q;
    let d = p.dimension();
    let phi = euler_phi(q)? as u128;
    let terms = (q as u128)
        .checked_pow(d as u32)
        .and_then(|v| v.checked_add(phi * (q as u128).pow(2)))
        .unwrap_or(u128::MAX);
    check_budget("Kloosterman brute force", terms, BRUTEFORCE_TERM_LIMIT)?;

    let roots = RootsOfUnity::new(q);
    let units = unit_values(q);
    let lam = p.lambda % q;
    let l: Vec<u64> = p.l.iter().map(|r| r.value()).collect();

    // The phase a·(|x|² - λ) + l·x depends on x only through the pair
    // (|x|² - λ mod q, l·x mod q); count the pairs, then sum over a.
    let qs = q as usize;
    let mut hist = vec![0u64; qs * qs];
    let mut x = vec![0u64; d];
    loop {
        let norm = x.iter().map(|&xi| xi * xi % q).sum::<u64>() % q;
        let lin = x.iter().zip(&l).map(|(&xi, &li)| xi * li % q).sum::<u64>() % q;
        let quad = (norm + q - lam) % q;
        hist[quad as usize * qs + lin as usize] += 1;
        // odometer over Z_q^d
        let mut i = 0;
        loop {
            if i == d {
                break;
            }
            x[i] += 1;
            if x[i] < q {
                break;
            }
            x[i] = 0;
            i += 1;
        }
        if i == d {
            break;
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    for &a in &units {
        for quad in 0..q {
            for lin in 0..q {
                let count = hist[(quad * q + lin) as usize];
                if count != 0 {
                    total += roots.at_reduced((a * quad + lin) % q) * count as f64;
                }
            }
        }
    }
    Ok(total / (q as f64).powi(d as i32))
}

/// `q^{-d} Σ_{a ∈ U_q} e(-λa/q) Π_i g(a, l_i; q)`.
pub fn kloosterman_factored(p: &KloostermanParams) -> Result<Complex64> {
    let q = p.q;
    let d = p.dimension();
    let phi = euler_phi(q)? as u128;
    check_budget(
        "Kloosterman factored",
        q as u128 * phi * d as u128,
        FACTORED_TERM_LIMIT,
    )?;
    let roots = RootsOfUnity::new(q);
    let mut total = Complex64::new(0.0, 0.0);
    for a in unit_values(q) {
        let mut prod = roots.at(-((a * (p.lambda % q)) as i64));
        for li in &p.l {
            prod *= gauss_sum_with(&roots, a as i64, li.value() as i64);
        }
        total += prod;
    }
    Ok(total / (q as f64).powi(d as i32))
}

/// Cached Gauss sums `g(a, b; q)` for every unit `a` and every `b mod q`,
/// so that `K(λ, q, l)` costs `φ(q)·d` multiplications.
#[derive(Debug, Clone)]
pub struct KloostermanTable {
    q: u64,
    d: usize,
    roots: RootsOfUnity,
    units: Vec<u64>,
    /// row-major `units.len() × q`
    gauss: Vec<Complex64>,
}

impl KloostermanTable {
    pub fn new(d: usize, q: u64) -> Result<Self> {
        if q == 0 || d == 0 {
            return Err(Error::invalid("KloostermanTable requires q ≥ 1 and d ≥ 1"));
        }
        let roots = RootsOfUnity::new(q);
        let units = unit_values(q);
        check_budget(
            "Kloosterman table",
            units.len() as u128 * q as u128 * q as u128,
            FACTORED_TERM_LIMIT,
        )?;
        let mut gauss = Vec::with_capacity(units.len() * q as usize);
        for &a in &units {
            for b in 0..q {
                gauss.push(gauss_sum_with(&roots, a as i64, b as i64));
            }
        }
        Ok(KloostermanTable {
            q,
            d,
            roots,
            units,
            gauss,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    /// `K(λ, q, l)`; `l` is reduced mod `q` and must have length `d`.
    pub fn eval(&self, lambda: u64, l: &[i64]) -> Complex64 {
        debug_assert_eq!(l.len(), self.d);
        let q = self.q as i64;
        let lam = lambda % self.q;
        let width = self.q as usize;
        let mut total = Complex64::new(0.0, 0.0);
        for (row, &a) in self.units.iter().enumerate() {
            let gs = &self.gauss[row * width..(row + 1) * width];
            let mut prod = self.roots.at(-((a * lam) as i64));
            for &li in l {
                prod *= gs[li.rem_euclid(q) as usize];
            }
            total += prod;
        }
        total / (self.q as f64).powi(self.d as i32)
    }
}

/// Outcome of [`kloosterman_sup`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupEstimate {
    pub value: f64,
    /// `true` when every `l ∈ Z_q^d` was covered (up to the symmetries of
    /// `K`); otherwise `value` is only a lower bound for the sup.
    pub exact: bool,
    pub evaluated: usize,
}

/// `sup_l |K(λ, q, l)|`.
///
/// `K` depends on `l` only through the multiset `{min(l_i, q - l_i)}`
/// because `g(a, -b; q) = g(a, b; q)`, so the exact regime walks
/// nondecreasing tuples in `[0, q/2]^d`. When `q^d` exceeds
/// [`SUP_EXACT_LIMIT`] the sup is taken over `l = 0` plus `l_samples`
/// seeded random vectors.
pub fn kloosterman_sup(d: usize, lambda: u64, q: u64, l_samples: usize, seed: u64) -> Result<SupEstimate> {
    if q > 200 {
        return Err(Error::invalid("kloosterman_sup supports q ≤ 200"));
    }
    let table = KloostermanTable::new(d, q)?;
    let total = (q as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if total <= SUP_EXACT_LIMIT {
        let half = (q / 2) as i64;
        let mut best = 0.0f64;
        let mut evaluated = 0usize;
        let mut l = vec![0i64; d];
        loop {
            best = best.max(table.eval(lambda, &l).norm());
            evaluated += 1;
            // next nondecreasing tuple
            let mut i = d;
            loop {
                if i == 0 {
                    return Ok(SupEstimate {
                        value: best,
                        exact: true,
                        evaluated,
                    });
                }
                i -= 1;
                if l[i] < half {
                    let v = l[i] + 1;
                    for slot in &mut l[i..] {
                        *slot = v;
                    }
                    break;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = table.eval(lambda, &vec![0; d]).norm();
    let mut l = vec![0i64; d];
    for _ in 0..l_samples {
        for li in &mut l {
            *li = rng.gen_range(0..q as i64);
        }
        best = best.max(table.eval(lambda, &l).norm());
    }
    Ok(SupEstimate {
        value: best,
        exact: false,
        evaluated: l_samples + 1,
    })
}

/// How the frequency vector is chosen in [`kloosterman_q_sum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LStrategy {
    Zero,
    /// Fresh uniformly random `l mod q` for each `q`, from a seeded stream.
    Random { seed: u64 },
}

/// `Σ_{q ≤ ⌊√λ⌋} |K(λ, q, l)|`.
pub fn kloosterman_q_sum(d: usize, lambda: u64, strategy: LStrategy) -> Result<f64> {
    if lambda == 0 || lambda > 10_000 {
        return Err(Error::invalid("kloosterman_q_sum requires 1 ≤ λ ≤ 10^4"));
    }
    let mut rng = match strategy {
        LStrategy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed ^ lambda)),
        LStrategy::Zero => None,
    };
    let mut total = 0.0;
    for q in 1..=floor_sqrt(lambda) {
        let l: Vec<i64> = match rng.as_mut() {
            Some(rng) => (0..d).map(|_| rng.gen_range(0..q as i64)).collect(),
            None => vec![0; d],
        };
        let p = KloostermanParams::new(lambda, q, &l)?;
        total += kloosterman_factored(&p)?.norm();
    }
    Ok(total)
}

/// [`kloosterman_q_sum`] for many `λ`, with Gauss sums tabulated once per
/// modulus.
pub struct QSumSweep {
    d: usize,
    tables: Vec<KloostermanTable>,
}

impl QSumSweep {
    /// Covers every `λ ≤ lambda_max`.
    pub fn new(d: usize, lambda_max: u64) -> Result<Self> {
        if lambda_max == 0 || lambda_max > 10_000 {
            return Err(Error::invalid("QSumSweep requires 1 ≤ λ_max ≤ 10^4"));
        }
        let tables = (1..=floor_sqrt(lambda_max))
            .map(|q| KloostermanTable::new(d, q))
            .collect::<Result<_>>()?;
        Ok(QSumSweep { d, tables })
    }

    pub fn q_sum(&self, lambda: u64, strategy: LStrategy) -> Result<f64> {
        let root = floor_sqrt(lambda) as usize;
        if lambda == 0 || root > self.tables.len() {
            return Err(Error::invalid("λ outside the sweep range"));
        }
        let mut rng = match strategy {
            LStrategy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed ^ lambda)),
            LStrategy::Zero => None,
        };
        let mut total = 0.0;
        for table in &self.tables[..root] {
            let q = table.q() as i64;
            let l: Vec<i64> = match rng.as_mut() {
                Some(rng) => (0..self.d).map(|_| rng.gen_range(0..q)).collect(),
                None => vec![0; self.d],
            };
            total += table.eval(lambda, &l).norm();
        }
        Ok(total)
    }
}

/// `Σ_{q ≤ ⌊√λ⌋} q^β ρ(q, λ)^{1/2}`.
pub fn rho_weighted_sum(beta: f64, lambda: u64) -> Result<f64> {
    if lambda == 0 || lambda > 1_000_000 {
        return Err(Error::invalid("rho_weighted_sum requires 1 ≤ λ ≤ 10^6"));
    }
    Ok((1..=floor_sqrt(lambda))
        .map(|q| (q as f64).powf(beta) * (rho(q, lambda) as f64).sqrt())
        .sum())
}

/// Truncated singular series `Σ_{q ≤ ⌊√λ⌋} K(λ, q, 0)`, the value of the
/// literal main term at the zero frequency.
pub fn truncated_singular_series(d: usize, lambda: u64) -> Result<f64> {
    let mut total = 0.0;
    for q in 1..=floor_sqrt(lambda).max(1) {
        let p = KloostermanParams::new(lambda, q, &vec![0; d])?;
        total += kloosterman_factored(&p)?.re;
    }
    Ok(total)
}
