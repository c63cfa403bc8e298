//! Frequency-side objects of the circle-method decomposition
//!
//! ```text
//! Â_λ(ξ) = M̂_λ(ξ) + Ê_λ(ξ),
//! M̂_λ(ξ) = Σ_{q ≤ √λ} Σ_{l ∈ Z^d} K(λ, q, l) Ψ(qξ - l) dσ̂_λ(ξ - l/q).
//! ```
//!
//! The `l`-sum runs over integer lifts so that every piece is a genuine
//! 1-periodic function on the torus; `K` only sees `l mod q`.

pub mod bump;
pub mod surface;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{e, floor_sqrt};
use crate::error::{Error, Result};
use crate::expsum::KloostermanTable;
use crate::lattice::{enumerate_sphere_with, is_admissible, LatticeBudget, SphereShell};

pub use bump::{psi, psi_raw, psi_scaled};
pub use surface::{surface_ft, surface_ft_decay, surface_ft_radial, DecayRow};

/// A point of the torus `T^d`, stored with coordinates in `[-1/2, 1/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frequency {
    coords: Vec<f64>,
}

#[inline]
fn canonical(x: f64) -> f64 {
    let r = x - (x + 0.5).floor();
    // guard against r == 0.5 from rounding
    if r >= 0.5 {
        r - 1.0
    } else {
        r
    }
}

impl Frequency {
    pub fn new(coords: Vec<f64>) -> Self {
        Frequency {
            coords: coords.into_iter().map(canonical).collect(),
        }
    }

    pub fn zero(d: usize) -> Self {
        Frequency {
            coords: vec![0.0; d],
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }
}

/// Which piece of the decomposition a [`Multiplier`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Piece {
    /// `Σ_{q ≤ q_max} M̂^q_λ`.
    FullMain,
    /// `M̂^q_λ` for one `q`.
    QSlice(u64),
    /// `M̂^q_{λ,1}`: the slice with the narrower bump `Ψ_B(ξ - l/q)`.
    Low(u64),
    /// `M̂^q_{λ,2} = M̂^q_λ - M̂^q_{λ,1}`.
    High(u64),
    /// `Σ_{1 ≤ q ≤ q_max} M̂^q_{λ,1}`.
    LowSum,
    /// `Σ_{1 ≤ q ≤ q_max} M̂^q_{λ,2}`.
    HighSum,
    /// `Ê_λ = Â_λ - M̂_λ` with the full range `q ≤ ⌊√λ⌋`.
    Error,
    /// `Â_λ = σ̂_λ`.
    Discrete,
}

/// Scale `B` of the bump in the low-frequency piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowScale {
    /// `B = q√λ/α`; `Ψ_q - Ψ_B` then vanishes on `|ξ - l/q|_∞ < α/(8q√λ)`.
    #[default]
    QSqrtLambdaOverAlpha,
    /// `B = √λ/α`.
    SqrtLambdaOverAlpha,
}

/// Overall factor applied to the main term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MainNormalization {
    /// The sum exactly as written, factor 1. Its value at `ξ = 0` is the
    /// truncated singular series `Σ_{q ≤ √λ} K(λ, q, 0)`, not 1.
    Literal,
    /// Divide by the truncated singular series, so the main term equals
    /// `Â_λ(0) = 1` at the origin.
    #[default]
    SingularSeries,
    /// Multiply by `ω_d λ^{d/2-1} / N(λ)` with `ω_d = π^{d/2}/Γ(d/2)`, the
    /// ratio of the singular integral to the lattice count.
    CountRatio,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierSpec {
    pub d: usize,
    pub lambda: u64,
    pub q_max: u64,
    pub alpha: f64,
    pub piece: Piece,
    pub low_scale: LowScale,
    pub normalization: MainNormalization,
}

impl MultiplierSpec {
    /// Defaults: `q_max = ⌊√λ⌋`, `α = 1`.
    pub fn new(d: usize, lambda: u64, piece: Piece) -> Self {
        MultiplierSpec {
            d,
            lambda,
            q_max: floor_sqrt(lambda),
            alpha: 1.0,
            piece,
            low_scale: LowScale::default(),
            normalization: MainNormalization::default(),
        }
    }

    pub fn with_q_max(mut self, q_max: u64) -> Self {
        self.q_max = q_max;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_low_scale(mut self, scale: LowScale) -> Self {
        self.low_scale = scale;
        self
    }

    pub fn with_normalization(mut self, normalization: MainNormalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::invalid("multiplier dimension must be at least 2"));
        }
        if self.lambda == 0 {
            return Err(Error::invalid("λ must be positive"));
        }
        let root = floor_sqrt(self.lambda);
        if self.q_max > root {
            return Err(Error::invalid(format!(
                "q_max = {} exceeds ⌊√λ⌋ = {root}",
                self.q_max
            )));
        }
        let sqrt_lambda = (self.lambda as f64).sqrt();
        let check_split = |q: u64| -> Result<()> {
            if q == 0 || (q as f64) > self.alpha || self.alpha > sqrt_lambda {
                Err(Error::invalid(format!(
                    "low/high split needs 1 ≤ q ≤ α ≤ √λ (q = {q}, α = {}, √λ = {sqrt_lambda})",
                    self.alpha
                )))
            } else {
                Ok(())
            }
        };
        match self.piece {
            Piece::QSlice(q) if q == 0 || q > root => Err(Error::invalid(format!(
                "slice q = {q} outside 1..=⌊√λ⌋"
            ))),
            Piece::Low(q) | Piece::High(q) => check_split(q),
            Piece::LowSum | Piece::HighSum => {
                if self.alpha < 1.0 || self.alpha > sqrt_lambda {
                    return Err(Error::invalid("split sums need 1 ≤ α ≤ √λ"));
                }
                if self.q_max as f64 > self.alpha {
                    return Err(Error::invalid("split sums need q_max ≤ α"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn low_bump_scale(&self, q: u64) -> f64 {
        let base = (self.lambda as f64).sqrt() / self.alpha;
        match self.low_scale {
            LowScale::QSqrtLambdaOverAlpha => q as f64 * base,
            LowScale::SqrtLambdaOverAlpha => base,
        }
    }
}

/// `σ̂_λ(ξ) = N(λ)^{-1} Σ_{|m|²=λ} e(-m·ξ)` summed over the nonnegative
/// orthant: the sign orbit of `m` contributes `Π_i 2cos(2π m_i ξ_i)`
/// (factor 1 where `m_i = 0`).
#[derive(Debug, Clone)]
pub struct DiscreteMultiplier {
    d: usize,
    count: usize,
    orthant: Vec<u16>,
    max_coord: usize,
}

impl DiscreteMultiplier {
    pub fn new(shell: &SphereShell) -> Self {
        let d = shell.dimension();
        let mut orthant = Vec::new();
        let mut max_coord = 0usize;
        for p in shell.points().filter(|p| p.iter().all(|&c| c >= 0)) {
            for &c in p {
                orthant.push(c as u16);
                max_coord = max_coord.max(c as usize);
            }
        }
        DiscreteMultiplier {
            d,
            count: shell.count(),
            orthant,
            max_coord,
        }
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        let width = self.max_coord + 1;
        let mut table = vec![0.0; self.d * width];
        for (i, &x) in xi.iter().enumerate() {
            let row = &mut table[i * width..(i + 1) * width];
            row[0] = 1.0;
            if width > 1 {
                let t1 = 2.0 * (TAU * x).cos();
                row[1] = t1;
                let (mut prev, mut cur) = (2.0, t1);
                for slot in row.iter_mut().skip(2) {
                    let next = t1 * cur - prev;
                    *slot = next;
                    prev = cur;
                    cur = next;
                }
            }
        }
        let mut sum = 0.0;
        for p in self.orthant.chunks_exact(self.d) {
            let mut prod = 1.0;
            for (i, &c) in p.iter().enumerate() {
                prod *= table[i * width + c as usize];
            }
            sum += prod;
        }
        sum / self.count as f64
    }
}

/// Direct trigonometric sum over every shell point.
pub fn discrete_multiplier_direct(shell: &SphereShell, xi: &[f64]) -> Complex64 {
    let total: Complex64 = shell
        .points()
        .map(|m| e(-m.iter().zip(xi).map(|(&mi, &x)| mi as f64 * x).sum::<f64>()))
        .sum();
    total / shell.count() as f64
}

/// `σ̂_λ(ξ)` for an admissible `λ`.
pub fn discrete_multiplier(d: usize, lambda: u64, xi: &Frequency) -> Result<Complex64> {
    if !is_admissible(d, lambda) {
        return Err(Error::invalid(format!("λ = {lambda} is not admissible in d = {d}")));
    }
    let shell = enumerate_sphere_with(d, lambda, &LatticeBudget::default())?;
    Ok(discrete_multiplier_direct(&shell, xi.coords()))
}

/// Above this many entries `K(λ, q, ·)` is evaluated per call instead of
/// tabulated over `Z_q^d`.
const K_CACHE_LIMIT: u128 = 1 << 16;

struct SliceData {
    q: u64,
    table: KloostermanTable,
    cached: Option<Vec<Complex64>>,
}

impl SliceData {
    fn k(&self, lambda: u64, l: &[i64]) -> Complex64 {
        match &self.cached {
            Some(values) => {
                let q = self.q as i64;
                let idx = l
                    .iter()
                    .fold(0usize, |acc, &li| acc * self.q as usize + li.rem_euclid(q) as usize);
                values[idx]
            }
            None => self.table.eval(lambda, l),
        }
    }
}

/// Evaluator for every main-term piece at a fixed `(d, λ)`.
pub struct MainTerm {
    d: usize,
    lambda: u64,
    sqrt_lambda: f64,
    slices: Vec<SliceData>,
    factor: f64,
}

impl MainTerm {
    /// Tabulates Gauss sums for `q ≤ ⌊√λ⌋`. `count` is `N(λ)`, needed only
    /// by [`MainNormalization::CountRatio`].
    pub fn new(d: usize, lambda: u64, normalization: MainNormalization, count: usize) -> Result<Self> {
        let root = floor_sqrt(lambda);
        let mut slices = Vec::with_capacity(root as usize);
        for q in 1..=root {
            let table = KloostermanTable::new(d, q)?;
            let entries = (q as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
            let cached = (entries <= K_CACHE_LIMIT).then(|| {
                let mut l = vec![0i64; d];
                let mut values = Vec::with_capacity(entries as usize);
                loop {
                    values.push(table.eval(lambda, &l));
                    let mut i = d;
                    loop {
                        if i == 0 {
                            return values;
                        }
                        i -= 1;
                        l[i] += 1;
                        if l[i] < q as i64 {
                            break;
                        }
                        l[i] = 0;
                    }
                }
            });
            slices.push(SliceData { q, table, cached });
        }
        let mut main = MainTerm {
            d,
            lambda,
            sqrt_lambda: (lambda as f64).sqrt(),
            slices,
            factor: 1.0,
        };
        main.factor = match normalization {
            MainNormalization::Literal => 1.0,
            MainNormalization::SingularSeries => {
                let zero = vec![0i64; d];
                let series: f64 = main.slices.iter().map(|s| s.k(lambda, &zero).re).sum();
                if series.abs() < 1e-12 {
                    return Err(Error::invalid("truncated singular series vanishes"));
                }
                1.0 / series
            }
            MainNormalization::CountRatio => {
                let half = d as f64 / 2.0;
                let omega = PI.powf(half) / gamma_half(d);
                omega * (lambda as f64).powf(half - 1.0) / count as f64
            }
        };
        Ok(main)
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }

    /// `Σ_{l ∈ Z^d} K(λ, q, l) Ψ_B(ξ - l/q) dσ̂_λ(ξ - l/q)`; `B = q` gives the
    /// standard slice `Ψ(qξ - l)`.
    pub fn slice_with_scale(&self, q: u64, bump_scale: f64, xi: &[f64]) -> Complex64 {
        let data = &self.slices[(q - 1) as usize];
        let qf = q as f64;
        let reach = bump::SUPPORT / bump_scale;
        let mut ranges = Vec::with_capacity(self.d);
        for &x in xi {
            if bump_scale >= qf {
                // at most one lift: the nearest integer to qξ
                let l = (qf * x).round_ties_even() as i64;
                if (x - l as f64 / qf).abs() >= reach {
                    return Complex64::new(0.0, 0.0);
                }
                ranges.push((l, l));
            } else {
                let lo = (qf * (x - reach)).ceil() as i64;
                let hi = (qf * (x + reach)).floor() as i64;
                if lo > hi {
                    return Complex64::new(0.0, 0.0);
                }
                ranges.push((lo, hi));
            }
        }
        let mut l: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        let mut shifted = vec![0.0; self.d];
        let mut total = Complex64::new(0.0, 0.0);
        loop {
            for i in 0..self.d {
                shifted[i] = xi[i] - l[i] as f64 / qf;
            }
            let bump = psi_scaled(bump_scale, &shifted);
            if bump != 0.0 {
                let norm = shifted.iter().map(|s| s * s).sum::<f64>().sqrt();
                let sigma = surface_ft_radial(self.d, self.sqrt_lambda * norm);
                total += data.k(self.lambda, &l) * (bump * sigma);
            }
            let mut i = 0;
            loop {
                if i == self.d {
                    return total * self.factor;
                }
                if l[i] < ranges[i].1 {
                    l[i] += 1;
                    break;
                }
                l[i] = ranges[i].0;
                i += 1;
            }
        }
    }

    pub fn slice(&self, q: u64, xi: &[f64]) -> Complex64 {
        self.slice_with_scale(q, q as f64, xi)
    }

    pub fn full(&self, q_max: u64, xi: &[f64]) -> Complex64 {
        (1..=q_max).map(|q| self.slice(q, xi)).sum()
    }
}

/// `Γ(d/2)`.
fn gamma_half(d: usize) -> f64 {
    if d % 2 == 0 {
        (1..d / 2).map(|k| k as f64).product()
    } else {
        let mut v = PI.sqrt();
        let mut x = 0.5;
        while x < d as f64 / 2.0 - 0.25 {
            v *= x;
            x += 1.0;
        }
        v
    }
}

/// A ready-to-evaluate multiplier piece.
pub struct Multiplier {
    spec: MultiplierSpec,
    discrete: Option<DiscreteMultiplier>,
    main: Option<MainTerm>,
}

impl Multiplier {
    pub fn new(spec: MultiplierSpec, budget: &LatticeBudget) -> Result<Self> {
        spec.validate()?;
        let needs_discrete = matches!(spec.piece, Piece::Discrete | Piece::Error);
        let needs_count = needs_discrete || spec.normalization == MainNormalization::CountRatio;
        let needs_main = spec.piece != Piece::Discrete;
        let shell = if needs_count {
            if !is_admissible(spec.d, spec.lambda) {
                return Err(Error::invalid(format!(
                    "λ = {} is not admissible in d = {}",
                    spec.lambda, spec.d
                )));
            }
            Some(enumerate_sphere_with(spec.d, spec.lambda, budget)?)
        } else {
            None
        };
        let main = if needs_main {
            let count = shell.as_ref().map_or(0, |s| s.count());
            Some(MainTerm::new(spec.d, spec.lambda, spec.normalization, count)?)
        } else {
            None
        };
        let discrete = if needs_discrete {
            shell.as_ref().map(DiscreteMultiplier::new)
        } else {
            None
        };
        Ok(Multiplier {
            spec,
            discrete,
            main,
        })
    }

    pub fn spec(&self) -> &MultiplierSpec {
        &self.spec
    }

    pub fn main_term(&self) -> Option<&MainTerm> {
        self.main.as_ref()
    }

    /// Evaluates at raw coordinates, which must already be a torus
    /// representative.
    pub fn eval_coords(&self, xi: &[f64]) -> Complex64 {
        let spec = &self.spec;
        let main = || self.main.as_ref().expect("main term prepared");
        let low = |q: u64| main().slice_with_scale(q, spec.low_bump_scale(q), xi);
        match spec.piece {
            Piece::Discrete => Complex64::new(self.discrete.as_ref().expect("shell").eval(xi), 0.0),
            Piece::FullMain => main().full(spec.q_max, xi),
            Piece::QSlice(q) => main().slice(q, xi),
            Piece::Low(q) => low(q),
            Piece::High(q) => main().slice(q, xi) - low(q),
            Piece::LowSum => (1..=spec.q_max).map(low).sum(),
            Piece::HighSum => (1..=spec.q_max).map(|q| main().slice(q, xi) - low(q)).sum(),
            Piece::Error => {
                let a = self.discrete.as_ref().expect("shell").eval(xi);
                Complex64::new(a, 0.0) - main().full(floor_sqrt(spec.lambda), xi)
            }
        }
    }

    pub fn eval(&self, xi: &Frequency) -> Complex64 {
        self.eval_coords(xi.coords())
    }
}

/// `M̂_λ(ξ)` (or one slice of it) for `piece ∈ {FullMain, QSlice}`.
pub fn main_term(spec: &MultiplierSpec, xi: &Frequency) -> Result<Complex64> {
    if !matches!(spec.piece, Piece::FullMain | Piece::QSlice(_)) {
        return Err(Error::invalid("main_term expects FullMain or QSlice"));
    }
    Ok(Multiplier::new(spec.clone(), &LatticeBudget::default())?.eval(xi))
}

/// `M̂^q_{λ,1}` or `M̂^q_{λ,2}` for `piece ∈ {Low(q), High(q)}`.
pub fn low_high_split(spec: &MultiplierSpec, xi: &Frequency) -> Result<Complex64> {
    if !matches!(spec.piece, Piece::Low(_) | Piece::High(_)) {
        return Err(Error::invalid("low_high_split expects Low or High"));
    }
    Ok(Multiplier::new(spec.clone(), &LatticeBudget::default())?.eval(xi))
}

/// `Ê_λ(ξ) = Â_λ(ξ) - M̂_λ(ξ)` with `q ≤ ⌊√λ⌋`.
pub fn error_multiplier(d: usize, lambda: u64, xi: &Frequency) -> Result<Complex64> {
    let spec = MultiplierSpec::new(d, lambda, Piece::Error);
    Ok(Multiplier::new(spec, &LatticeBudget::default())?.eval(xi))
}

/// Deterministic sample set for estimating `sup_ξ |Ê_λ(ξ)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleStrategy {
    /// points per coordinate of the uniform grid `k/g - 1/2`
    pub grid_resolution: usize,
    /// frequency vectors `l` tried per `q` (the first is always `l = 0`)
    pub rational_l_per_q: usize,
    pub random_points: usize,
    pub seed: u64,
    pub normalization: MainNormalization,
}

impl Default for SampleStrategy {
    fn default() -> Self {
        SampleStrategy {
            grid_resolution: 8,
            rational_l_per_q: 4,
            random_points: 1024,
            seed: 1,
            normalization: MainNormalization::default(),
        }
    }
}

impl SampleStrategy {
    /// Grid points, then each `l/q` with `q ≤ ⌊√λ⌋` together with a copy
    /// offset by `±1/(16 q √λ)` per coordinate, then seeded random points.
    pub fn points(&self, d: usize, lambda: u64) -> Vec<Frequency> {
        let mut out = Vec::new();
        let g = self.grid_resolution;
        if g > 0 {
            let total = g.pow(d as u32);
            for idx in 0..total {
                let mut rem = idx;
                let mut c = vec![0.0; d];
                for slot in c.iter_mut().rev() {
                    *slot = (rem % g) as f64 / g as f64 - 0.5;
                    rem /= g;
                }
                out.push(Frequency::new(c));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let sqrt_lambda = (lambda as f64).sqrt();
        for q in 1..=floor_sqrt(lambda) {
            let offset = 1.0 / (16.0 * q as f64 * sqrt_lambda);
            for j in 0..self.rational_l_per_q {
                let l: Vec<i64> = if j == 0 {
                    vec![0; d]
                } else {
                    (0..d).map(|_| rng.gen_range(0..q as i64)).collect()
                };
                let center: Vec<f64> = l.iter().map(|&li| li as f64 / q as f64).collect();
                let shifted: Vec<f64> = center
                    .iter()
                    .map(|c| if rng.gen::<bool>() { c + offset } else { c - offset })
                    .collect();
                out.push(Frequency::new(center));
                out.push(Frequency::new(shifted));
            }
        }
        for _ in 0..self.random_points {
            out.push(Frequency::new((0..d).map(|_| rng.gen::<f64>() - 0.5).collect()));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSupSample {
    pub value: f64,
    pub argmax: Frequency,
    pub points: usize,
    pub seed: u64,
}

/// `max |Ê_λ(ξ)|` over an explicit point set; a lower bound for the sup.
pub fn error_sup_over(multiplier: &Multiplier, points: &[Frequency]) -> Option<(f64, Frequency)> {
    use rayon::prelude::*;
    points
        .par_iter()
        .map(|xi| (multiplier.eval(xi).norm(), xi))
        .reduce_with(|a, b| if b.0 > a.0 { b } else { a })
        .map(|(v, xi)| (v, xi.clone()))
}

pub fn error_sup_sample(d: usize, lambda: u64, strategy: &SampleStrategy) -> Result<ErrorSupSample> {
    let spec = MultiplierSpec::new(d, lambda, Piece::Error).with_normalization(strategy.normalization);
    let multiplier = Multiplier::new(spec, &LatticeBudget::default())?;
    let points = strategy.points(d, lambda);
    let (value, argmax) =
        error_sup_over(&multiplier, &points).ok_or_else(|| Error::invalid("empty sample set"))?;
    Ok(ErrorSupSample {
        value,
        argmax,
        points: points.len(),
        seed: strategy.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate_sphere;

    fn random_freq(rng: &mut ChaCha8Rng, d: usize) -> Frequency {
        Frequency::new((0..d).map(|_| rng.gen::<f64>() - 0.5).collect())
    }

    #[test]
    fn frequency_is_canonical() {
        let f = Frequency::new(vec![0.5, -0.5, 1.25, -0.75, 3.0]);
        assert_eq!(f.coords(), &[-0.5, -0.5, 0.25, 0.25, 0.0]);
    }

    #[test]
    fn discrete_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = discrete_multiplier(4, 7, &Frequency::zero(4)).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
        for _ in 0..20 {
            let xi = random_freq(&mut rng, 4);
            let v = discrete_multiplier(4, 1, &xi).unwrap();
            let expected: f64 = xi.coords().iter().map(|x| (TAU * x).cos()).sum::<f64>() / 4.0;
            assert!((v.re - expected).abs() < 1e-12 && v.im.abs() < 1e-12);
        }
        assert!(discrete_multiplier(4, 8, &Frequency::zero(4)).is_err());
    }

    #[test]
    fn orthant_evaluation_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (d, lambda) in [(4, 15u64), (4, 99), (5, 23), (3, 17)] {
            let shell = enumerate_sphere(d, lambda).unwrap();
            let fast = DiscreteMultiplier::new(&shell);
            for _ in 0..30 {
                let xi = random_freq(&mut rng, d);
                let direct = discrete_multiplier_direct(&shell, xi.coords());
                assert!((fast.eval(xi.coords()) - direct.re).abs() < 1e-12);
                assert!(direct.im.abs() < 1e-12);
                let neg: Vec<f64> = xi.coords().iter().map(|x| -x).collect();
                let mirrored = discrete_multiplier_direct(&shell, &neg);
                assert!((mirrored - direct.conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn main_term_single_q_at_origin_is_one() {
        for lambda in [1u64, 7, 30] {
            let spec = MultiplierSpec::new(4, lambda, Piece::FullMain)
                .with_q_max(1)
                .with_normalization(MainNormalization::Literal);
            let v = main_term(&spec, &Frequency::zero(4)).unwrap();
            assert!((v - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn at_most_one_lift_per_q() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let xi = random_freq(&mut rng, 4);
            for q in 1..=10u64 {
                let qi = q as i64;
                let mut nonzero = 0;
                // every residue class, each with the lift closest to qξ
                let mut l = [0i64; 4];
                loop {
                    let shifted: Vec<f64> = (0..4)
                        .map(|i| {
                            let target = q as f64 * xi.coords()[i];
                            let k = ((target - l[i] as f64) / q as f64).round();
                            target - (l[i] as f64 + k * q as f64)
                        })
                        .collect();
                    if psi_raw(&shifted) != 0.0 {
                        nonzero += 1;
                    }
                    let mut i = 0;
                    while i < 4 {
                        l[i] += 1;
                        if l[i] < qi {
                            break;
                        }
                        l[i] = 0;
                        i += 1;
                    }
                    if i == 4 {
                        break;
                    }
                }
                assert!(nonzero <= 1, "q={q} ξ={xi:?}");
            }
        }
    }

    #[test]
    fn low_plus_high_is_slice_and_high_vanishes_near_center() {
        let lambda = 400u64;
        let alpha = 5.0;
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for q in 1..=5u64 {
            let build = |piece| {
                Multiplier::new(
                    MultiplierSpec::new(4, lambda, piece).with_alpha(alpha),
                    &LatticeBudget::default(),
                )
                .unwrap()
            };
            let (slice, low, high) = (build(Piece::QSlice(q)), build(Piece::Low(q)), build(Piece::High(q)));
            for _ in 0..50 {
                let xi = random_freq(&mut rng, 4);
                let sum = low.eval(&xi) + high.eval(&xi);
                assert!((sum - slice.eval(&xi)).norm() < 1e-12);
            }
            let radius = alpha / (8.0 * q as f64 * (lambda as f64).sqrt());
            let l = [1i64.min(q as i64 - 1), 0, 0, 0];
            for _ in 0..50 {
                let xi = Frequency::new(
                    l.iter()
                        .map(|&li| li as f64 / q as f64 + rng.gen_range(-0.999..0.999) * radius)
                        .collect(),
                );
                assert!(high.eval(&xi).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn split_validation() {
        let bad = MultiplierSpec::new(4, 100, Piece::Low(3)).with_alpha(2.0);
        assert!(bad.validate().is_err());
        let bad = MultiplierSpec::new(4, 100, Piece::Low(1)).with_alpha(11.0);
        assert!(bad.validate().is_err());
        let bad = MultiplierSpec::new(4, 100, Piece::FullMain).with_q_max(11);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn error_vanishes_at_origin_with_default_normalization() {
        for lambda in [1u64, 3, 7, 15, 31, 63, 127] {
            let v = error_multiplier(4, lambda, &Frequency::zero(4)).unwrap();
            assert!(v.norm() < 1e-12, "λ={lambda}: {v}");
        }
        let v = error_multiplier(5, 50, &Frequency::zero(5)).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn sampling_is_monotone_in_the_point_set() {
        let spec = MultiplierSpec::new(4, 7, Piece::Error);
        let m = Multiplier::new(spec, &LatticeBudget::default()).unwrap();
        let strategy = SampleStrategy {
            grid_resolution: 4,
            random_points: 32,
            ..SampleStrategy::default()
        };
        let mut points = strategy.points(4, 7);
        let (base, _) = error_sup_over(&m, &points).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            points.push(random_freq(&mut rng, 4));
            let (v, _) = error_sup_over(&m, &points).unwrap();
            assert!(v >= base);
        }
    }

    #[test]
    fn gamma_half_values() {
        assert!((gamma_half(2) - 1.0).abs() < 1e-15);
        assert!((gamma_half(3) - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!((gamma_half(4) - 1.0).abs() < 1e-15);
        assert!((gamma_half(5) - 0.75 * PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half(8) - 6.0).abs() < 1e-15);
    }
}
