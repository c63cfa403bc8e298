//! The frequency cutoff `Ψ`: a tensor product of one-dimensional bumps equal
//! to 1 on `|t| ≤ 1/8` and vanishing for `|t| ≥ 1/4`.

use super::Frequency;

pub const PLATEAU: f64 = 0.125;
pub const SUPPORT: f64 = 0.25;

#[inline]
fn flat(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Smooth step `h(s) = f(s)/(f(s) + f(1 - s))` with `f(s) = exp(-1/s)`.
#[inline]
pub fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        let a = flat(s);
        a / (a + flat(1.0 - s))
    }
}

/// One coordinate of `Ψ`.
#[inline]
pub fn psi_1d(t: f64) -> f64 {
    let a = t.abs();
    if a <= PLATEAU {
        1.0
    } else if a >= SUPPORT {
        0.0
    } else {
        smooth_step((SUPPORT - a) / (SUPPORT - PLATEAU))
    }
}

/// `Ψ(x)` for `x ∈ R^d`, no torus reduction.
#[inline]
pub fn psi_raw(x: &[f64]) -> f64 {
    let mut v = 1.0;
    for &t in x {
        if t.abs() >= SUPPORT {
            return 0.0;
        }
        v *= psi_1d(t);
    }
    v
}

/// `Ψ(ξ)` at the canonical representative of a torus point.
pub fn psi(xi: &Frequency) -> f64 {
    psi_raw(xi.coords())
}

/// `Ψ_B(x) = Ψ(B x)`, scaling applied to the real vector before anything
/// else.
pub fn psi_scaled(b: f64, x: &[f64]) -> f64 {
    assert!(b > 0.0, "bump scale must be positive");
    let mut v = 1.0;
    for &t in x {
        let s = b * t;
        if s.abs() >= SUPPORT {
            return 0.0;
        }
        v *= psi_1d(s);
    }
    v
}
