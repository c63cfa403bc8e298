//! Independent oracles: direct sums and quadrature written without any of
//! the library's tables or factorizations.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `q^{-d} Σ_{a ∈ U_q} Σ_{x ∈ Z_q^d} e((-λa + a|x|² + l·x)/q)` by two nested
/// loops, one `cis` per term.
pub fn naive_kloosterman(d: usize, lambda: u64, q: u64, l: &[i64]) -> Complex64 {
    let qi = q as i64;
    let mut total = Complex64::new(0.0, 0.0);
    for a in 0..q {
        // U_1 = {0}
        if gcd(a, q) != 1 && q != 1 {
            continue;
        }
        let mut x = vec![0i64; d];
        loop {
            let norm: i64 = x.iter().map(|v| v * v).sum();
            let lin: i64 = x.iter().zip(l).map(|(v, w)| v * w).sum();
            let phase = (a as i64 * (norm - lambda as i64) + lin).rem_euclid(qi);
            total += Complex64::from_polar(1.0, TAU * phase as f64 / q as f64);
            let mut i = 0;
            while i < d {
                x[i] += 1;
                if x[i] < qi {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    total / (q as f64).powi(d as i32)
}

/// `#{m ∈ Z^d : |m|² = λ}` by scanning the cube `[-⌊√λ⌋, ⌊√λ⌋]^d`.
pub fn naive_count(d: usize, lambda: u64) -> u64 {
    let r = (lambda as f64).sqrt().floor() as i64;
    let mut x = vec![-r; d];
    let mut count = 0;
    loop {
        if x.iter().map(|v| v * v).sum::<i64>() == lambda as i64 {
            count += 1;
        }
        let mut i = 0;
        while i < d {
            x[i] += 1;
            if x[i] <= r {
                break;
            }
            x[i] = -r;
            i += 1;
        }
        if i == d {
            return count;
        }
    }
}

/// `Σ_{a ∈ U_q} cos(2πan/q)`, the real form of `c_q(n)`.
pub fn naive_ramanujan(q: u64, n: i64) -> f64 {
    (1..=q)
        .filter(|&a| gcd(a, q) == 1)
        .map(|a| (TAU * ((a as i64 * n).rem_euclid(q as i64)) as f64 / q as f64).cos())
        .sum()
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / dp;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Surface-measure transform by quadrature in the polar angle:
/// `∫_0^π cos(z cos θ) sin^{d-2}θ dθ / ∫_0^π sin^{d-2}θ dθ`, `z = 2π√λ|ξ|`.
pub fn quadrature_surface_ft(d: usize, lambda: f64, xi: &[f64]) -> f64 {
    let z = TAU * lambda.sqrt() * xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    let n = 40 + (2.0 * z) as usize;
    let (mut num, mut den) = (0.0, 0.0);
    for (t, w) in gauss_legendre(n) {
        let theta = PI * (t + 1.0) / 2.0;
        let weight = w * theta.sin().powi(d as i32 - 2);
        num += weight * (z * theta.cos()).cos();
        den += weight;
    }
    num / den
}

/// Ordinary least squares slope of `ln y` on `ln x`.
pub fn naive_loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}
