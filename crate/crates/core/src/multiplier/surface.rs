//! Fourier transform of the normalized surface measure on the sphere of
//! radius `√λ` in `R^d`:
//!
//! ```text
//! dσ̂_λ(ξ) = Γ(d/2) (π√λ|ξ|)^{-(d-2)/2} J_{(d-2)/2}(2π√λ|ξ|)
//! ```
//!
//! computed as `Λ_ν(z) = Γ(ν+1)(2/z)^ν J_ν(z)` with `ν = (d-2)/2` and
//! `z = 2π√λ|ξ|`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Below this argument integer orders use the power series.
pub const SERIES_CROSSOVER: f64 = 12.0;

/// Power series `Σ_k (-z²/4)^k / (k! (ν+1)_k)`.
fn normalized_series(nu: f64, z: f64) -> f64 {
    let w = -0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= w / (k * (nu + k));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && k > 2.0 {
            break;
        }
        if k > 400.0 {
            break;
        }
    }
    sum
}

/// Hankel asymptotic expansion of `J_ν(z)` for large `z`.
fn bessel_j_asymptotic(nu: f64, z: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0; // a_k(ν) / z^k
    let mut k = 0usize;
    let mut prev_abs = f64::INFINITY;
    loop {
        let abs = term.abs();
        if abs > prev_abs || k > 60 {
            break;
        }
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if abs < 1e-17 {
            break;
        }
        prev_abs = abs;
        let odd = (2 * k + 1) as f64;
        k += 1;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * z);
    }
    let chi = z - nu * FRAC_PI_2 - FRAC_PI_4;
    (2.0 / (PI * z)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// `Γ(ν + 1)` for `2ν` a nonnegative integer.
fn gamma_nu_plus_one(two_nu: u32) -> f64 {
    if two_nu % 2 == 0 {
        (1..=two_nu / 2).map(f64::from).product()
    } else {
        // Γ(n + 3/2) = (2n+1)!! √π / 2^{n+1}
        let n = (two_nu - 1) / 2;
        let mut v = PI.sqrt() / 2.0;
        for k in 1..=n {
            v *= k as f64 + 0.5;
        }
        v
    }
}

/// `(2n+1)!! j_n(z) / z^n` for half-integer order `ν = n + 1/2`, from the
/// closed trigonometric forms of the spherical Bessel functions.
fn normalized_half_integer(n: u32, z: f64) -> f64 {
    // Upward recurrence is stable once z exceeds the order.
    if z < (2 * n + 2) as f64 {
        return normalized_series(n as f64 + 0.5, z);
    }
    let (s, c) = z.sin_cos();
    let mut j_prev = s / z;
    if n == 0 {
        return j_prev;
    }
    let mut j = s / (z * z) - c / z;
    for k in 1..n {
        let next = (2 * k + 1) as f64 / z * j - j_prev;
        j_prev = j;
        j = next;
    }
    let double_factorial: f64 = (1..=n).map(|k| (2 * k + 1) as f64).product();
    double_factorial * j / z.powi(n as i32)
}

/// `Λ_ν(z) = Γ(ν+1)(2/z)^ν J_ν(z)` with `ν = two_nu / 2`; `Λ_ν(0) = 1`.
pub fn normalized_bessel(two_nu: u32, z: f64) -> f64 {
    let z = z.abs();
    if z == 0.0 {
        return 1.0;
    }
    if two_nu % 2 == 1 {
        return normalized_half_integer((two_nu - 1) / 2, z);
    }
    let nu = (two_nu / 2) as f64;
    if z < SERIES_CROSSOVER {
        normalized_series(nu, z)
    } else {
        gamma_nu_plus_one(two_nu) * (2.0 / z).powf(nu) * bessel_j_asymptotic(nu, z)
    }
}

/// `dσ̂_λ` as a function of `r = √λ |ξ|`.
#[inline]
pub fn surface_ft_radial(d: usize, r: f64) -> f64 {
    normalized_bessel((d - 2) as u32, TAU * r)
}

/// `dσ̂_λ(ξ) = ∫ e(-x·ξ) dσ_λ(x)` for the probability measure on the sphere
/// of radius `√λ`. Real by central symmetry.
pub fn surface_ft(d: usize, lambda: f64, xi: &[f64]) -> f64 {
    assert!(d >= 2, "surface_ft requires d ≥ 2");
    assert!(lambda > 0.0, "surface_ft requires λ > 0");
    let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    surface_ft_radial(d, lambda.sqrt() * norm)
}

/// One row of a decay sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRow {
    pub radius: f64,
    /// max over sampled directions of `|dσ̂_λ(r ω / √λ)|`
    pub sup_abs: f64,
    /// upper envelope: max of `sup_abs` over the radii `≥ radius` in the
    /// sampling window around it
    pub envelope: f64,
}

/// Samples `|dσ̂_λ|` at `|ξ| = r / √λ` along `directions` random unit
/// vectors, then forms the upper envelope as a running max over a unit
/// window `[r, r + 1)` of a fine radial grid.
pub fn surface_ft_decay(d: usize, lambda: f64, r_grid: &[f64], directions: usize, seed: u64) -> Vec<DecayRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs: Vec<Vec<f64>> = (0..directions.max(1))
        .map(|_| {
            let v: Vec<f64> = (0..d).map(|_| rng.gen::<f64>() - 0.5).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
            v.into_iter().map(|x| x / n).collect()
        })
        .collect();
    let scale = 1.0 / lambda.sqrt();
    let sup_at = |r: f64| {
        dirs.iter()
            .map(|w| {
                let xi: Vec<f64> = w.iter().map(|c| c * r * scale).collect();
                surface_ft(d, lambda, &xi).abs()
            })
            .fold(0.0f64, f64::max)
    };
    r_grid
        .iter()
        .map(|&radius| {
            let steps = 64;
            let envelope = (0..steps)
                .map(|k| sup_at(radius + k as f64 / steps as f64))
                .fold(0.0f64, f64::max);
            DecayRow {
                radius,
                sup_abs: sup_at(radius),
                envelope,
            }
        })
        .collect()
}
