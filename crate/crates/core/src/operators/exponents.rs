//! Restricted weak-type ratios and the exponent algebra of the
//! interpolation argument.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::{enumerate_sphere_with, LacunarySequence, LatticeBudget};

use super::average::lacunary_maximal;
use super::grid::GridFunction;

/// `(d - 1)/(d + 1)`, the exponent on level-set sizes.
pub fn weak_exponent(d: usize) -> f64 {
    (d as f64 - 1.0) / (d as f64 + 1.0)
}

/// `β |{M_lac 1_F > β}|^{(d-1)/(d+1)} / ‖1_F‖_{(d+1)/(d-1)}`.
pub fn weak_type_ratio(indicator: &GridFunction, seq: &LacunarySequence, beta: f64) -> Result<f64> {
    let maximal = lacunary_maximal(indicator, seq)?;
    ratio_from_maximal(&maximal, indicator, beta)
}

fn set_size(indicator: &GridFunction) -> Result<f64> {
    if indicator.values().iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(Error::invalid("weak-type ratios take indicator functions"));
    }
    let size = indicator.values().iter().filter(|&&v| v == 1.0).count();
    if size == 0 {
        return Err(Error::invalid("empty set"));
    }
    Ok(size as f64)
}

pub fn ratio_from_maximal(maximal: &GridFunction, indicator: &GridFunction, beta: f64) -> Result<f64> {
    let e = weak_exponent(indicator.dimension());
    let level = maximal.distribution_level(beta)? as f64;
    Ok(beta * level.powf(e) / set_size(indicator)?.powf(e))
}

/// `sup_β` of the weak-type ratio. For `β` just below a value `v` of
/// `M_lac 1_F` the level set is `{M_lac ≥ v}`, so the supremum is
/// `max_v v |{M_lac ≥ v}|^{(d-1)/(d+1)} / |F|^{(d-1)/(d+1)}`; it is
/// approached but not attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakTypeScan {
    pub max_ratio: f64,
    pub beta_at_max: f64,
    pub levels: usize,
}

pub fn weak_type_scan(indicator: &GridFunction, seq: &LacunarySequence) -> Result<WeakTypeScan> {
    let maximal = lacunary_maximal(indicator, seq)?;
    let values: Vec<f64> = maximal.values().iter().copied().filter(|&v| v > 0.0).collect();
    Ok(scan_values(values, set_size(indicator)?, indicator.dimension()))
}

/// [`weak_type_scan`] for `F` given as a point list, touching only the
/// union of the shells translated to the points of `F`.
pub fn weak_type_scan_points(d: usize, points: &[Vec<i64>], seq: &LacunarySequence) -> Result<WeakTypeScan> {
    let mut set: Vec<Vec<i64>> = points.to_vec();
    set.sort();
    set.dedup();
    if set.is_empty() || set.iter().any(|p| p.len() != d) {
        return Err(Error::invalid("need a nonempty set of d-dimensional points"));
    }
    let mut maximal: HashMap<Vec<i64>, f64> = HashMap::new();
    for &lambda in seq.radii() {
        let shell = enumerate_sphere_with(d, lambda, &LatticeBudget::default())?;
        let w = 1.0 / shell.count() as f64;
        let mut average: HashMap<Vec<i64>, f64> = HashMap::new();
        for p in &set {
            for m in shell.points() {
                let n: Vec<i64> = p.iter().zip(m).map(|(a, b)| a + b).collect();
                *average.entry(n).or_insert(0.0) += w;
            }
        }
        for (n, v) in average {
            let slot = maximal.entry(n).or_insert(0.0);
            *slot = slot.max(v);
        }
    }
    Ok(scan_values(maximal.into_values().collect(), set.len() as f64, d))
}

fn scan_values(mut values: Vec<f64>, size: f64, d: usize) -> WeakTypeScan {
    let e = weak_exponent(d);
    let norm = size.powf(e);
    values.sort_by(|a, b| b.total_cmp(a));
    let mut best = WeakTypeScan {
        max_ratio: 0.0,
        beta_at_max: 0.0,
        levels: 0,
    };
    let mut i = 0;
    while i < values.len() {
        let v = values[i];
        while i < values.len() && values[i] == v {
            i += 1;
        }
        best.levels += 1;
        let ratio = v * (i as f64).powf(e) / norm;
        if ratio > best.max_ratio {
            best.max_ratio = ratio;
            best.beta_at_max = v;
        }
    }
    best
}

/// The two terms of the final weak-type estimate with `α = β^{-1/(d-1)}`:
/// `β^{2/(d+1)} (α²|F|)^{(d-1)/(d+1)}` and
/// `β^{-(d-3)/(d+1)} α^{-(d-3)(d-1)/(d+1)} |F|^{(d-1)/(d+1)}`.
pub fn weak_type_budget(d: usize, beta: f64, set_size: f64) -> Result<(f64, f64)> {
    if d < 4 || !(beta > 0.0) || !(set_size > 0.0) {
        return Err(Error::invalid("weak_type_budget needs d ≥ 4, β > 0, |F| > 0"));
    }
    let df = d as f64;
    let alpha = beta.powf(-1.0 / (df - 1.0));
    let e = (df - 1.0) / (df + 1.0);
    let piece1 = beta.powf(2.0 / (df + 1.0)) * (alpha * alpha * set_size).powf(e);
    let piece2 = beta.powf(-(df - 3.0) / (df + 1.0))
        * alpha.powf(-(df - 3.0) * (df - 1.0) / (df + 1.0))
        * set_size.powf(e);
    Ok((piece1, piece2))
}

/// `(3 - d)/2 · (2 - 2/p) + 2(2/p - 1)`: the exponent of `Λ` after
/// interpolating the `l²` decay `Λ^{(3-d)/2}` with the trivial `l¹` bound.
pub fn interp_exponent(d: usize, p: f64) -> Result<f64> {
    if d < 4 || !(p >= 1.0) {
        return Err(Error::invalid("interp_exponent needs d ≥ 4 and p ≥ 1"));
    }
    let df = d as f64;
    Ok((3.0 - df) / 2.0 * (2.0 - 2.0 / p) + 2.0 * (2.0 / p - 1.0))
}

/// `(d + 1)/(d - 1)`, the root of [`interp_exponent`] in `p`.
pub fn critical_p(d: usize) -> Result<f64> {
    if d < 4 {
        return Err(Error::invalid("critical_p needs d ≥ 4"));
    }
    Ok((d as f64 + 1.0) / (d as f64 - 1.0))
}
