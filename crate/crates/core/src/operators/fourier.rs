//! Multiplier operators on finite grids.
//!
//! `f` is placed on the periodic grid `(Z/N)^d`, transformed with the
//! convention `f̂(k) = Σ_n f(n) e(-n·k/N)`, multiplied by `m(k/N)` and
//! inverted with the `N^{-d}` normalization. The result is the Riemann-sum
//! discretization of `∫ m(ξ) f̂(ξ) e(n·ξ) dξ`, which is exact when the
//! kernel of `m` fits in the grid and otherwise aliases.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::arith::ceil_sqrt;
use crate::error::{check_budget, Error, Result};
use crate::multiplier::Multiplier;

use super::grid::GridFunction;

/// Default cap on `N^d`.
pub const DEFAULT_CELL_BUDGET: u128 = 20_000_000;

/// Smallest odd `N ≥ min` whose prime factors are 3, 5 or 7.
pub fn smooth_fft_side(min: usize) -> usize {
    let mut n = min.max(1) | 1;
    loop {
        let mut r = n;
        for p in [3, 5, 7] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return n;
        }
        n += 2;
    }
}

/// Line-by-line `d`-dimensional FFT of side `n`.
pub struct FftGrid {
    d: usize,
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FftGrid {
    pub fn new(d: usize, n: usize) -> Self {
        let mut planner = FftPlanner::new();
        FftGrid {
            d,
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn cells(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for axis in 0..self.d {
            let stride = n.pow((self.d - 1 - axis) as u32);
            if stride == 1 {
                for chunk in data.chunks_exact_mut(n) {
                    fft.process_with_scratch(chunk, &mut scratch);
                }
                continue;
            }
            let block = stride * n;
            for base in (0..data.len()).step_by(block) {
                for offset in 0..stride {
                    let start = base + offset;
                    for (k, slot) in line.iter_mut().enumerate() {
                        *slot = data[start + k * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (k, v) in line.iter().enumerate() {
                        data[start + k * stride] = *v;
                    }
                }
            }
        }
    }

    /// `x̂(k) = Σ_n x(n) e(-n·k/N)`.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
    }

    /// `x(n) = N^{-d} Σ_k x̂(k) e(n·k/N)`.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
        let scale = 1.0 / self.cells() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

/// Orbits of the frequency grid `(Z/N)^d`, `N` odd, under coordinate
/// permutations and sign changes. Every multiplier piece is invariant under
/// this group, so it is evaluated once per orbit.
pub struct SymmetryIndex {
    d: usize,
    n: usize,
    cell_key: Vec<u32>,
    keys: Vec<Vec<u32>>,
    orbit_sizes: Vec<u64>,
}

impl SymmetryIndex {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if n % 2 == 0 {
            return Err(Error::invalid("symmetric frequency grids need odd N"));
        }
        let h = n / 2 + 1;
        // dense table over folded tuples; only sorted ones get ids
        let mut dense = vec![u32::MAX; h.pow(d as u32)];
        let mut keys = Vec::new();
        let mut tuple = vec![0u32; d];
        'walk: loop {
            let idx = tuple.iter().fold(0usize, |a, &t| a * h + t as usize);
            dense[idx] = keys.len() as u32;
            keys.push(tuple.clone());
            let mut i = d;
            loop {
                if i == 0 {
                    break 'walk;
                }
                i -= 1;
                if (tuple[i] as usize) < h - 1 {
                    let v = tuple[i] + 1;
                    for slot in &mut tuple[i..] {
                        *slot = v;
                    }
                    break;
                }
            }
        }
        let cells = n.pow(d as u32);
        let mut cell_key = vec![0u32; cells];
        let mut orbit_sizes = vec![0u64; keys.len()];
        let mut folded = vec![0u32; d];
        for (cell, slot) in cell_key.iter_mut().enumerate() {
            let mut rem = cell;
            for f in folded.iter_mut().rev() {
                let k = rem % n;
                rem /= n;
                *f = k.min(n - k) as u32;
            }
            folded.sort_unstable();
            let id = dense[folded.iter().fold(0usize, |a, &t| a * h + t as usize)];
            *slot = id;
            orbit_sizes[id as usize] += 1;
        }
        Ok(SymmetryIndex {
            d,
            n,
            cell_key,
            keys,
            orbit_sizes,
        })
    }

    pub fn key_count(&self) -> usize {
        self.keys.len()
    }

    pub fn orbit_sizes(&self) -> &[u64] {
        &self.orbit_sizes
    }

    /// Representative frequency `k/N ∈ [0, 1/2)^d` of an orbit.
    pub fn frequency(&self, key: usize) -> Vec<f64> {
        self.keys[key].iter().map(|&k| k as f64 / self.n as f64).collect()
    }
}

/// Multiplier values on the orbits of a [`SymmetryIndex`].
#[derive(Debug, Clone)]
pub struct MultiplierGrid {
    n: usize,
    values: Vec<Complex64>,
}

impl MultiplierGrid {
    pub fn evaluate(multiplier: &Multiplier, symmetry: &SymmetryIndex) -> Result<Self> {
        if multiplier.spec().d != symmetry.d {
            return Err(Error::invalid("multiplier and grid dimensions differ"));
        }
        let values = (0..symmetry.key_count())
            .into_par_iter()
            .map(|key| multiplier.eval_coords(&symmetry.frequency(key)))
            .collect();
        Ok(MultiplierGrid {
            n: symmetry.n,
            values,
        })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `(N^{-d} Σ_k |m(k/N)|²)^{1/2}`, the Riemann sum for `‖m‖_{L²(T^d)}`;
    /// equal to the `l²` norm over the periodic grid of the output for `δ_0`.
    pub fn l2_riemann(&self, symmetry: &SymmetryIndex) -> f64 {
        let sum: f64 = self
            .values
            .iter()
            .zip(&symmetry.orbit_sizes)
            .map(|(v, &w)| v.norm_sqr() * w as f64)
            .sum();
        (sum / symmetry.cell_key.len() as f64).sqrt()
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Everything needed to apply many multipliers on one grid size.
pub struct FourierContext {
    fft: FftGrid,
    symmetry: SymmetryIndex,
}

impl FourierContext {
    pub fn new(d: usize, n: usize, cell_budget: u128) -> Result<Self> {
        let cells = (n as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        check_budget("frequency grid cells", cells, cell_budget)?;
        Ok(FourierContext {
            fft: FftGrid::new(d, n),
            symmetry: SymmetryIndex::new(d, n)?,
        })
    }

    pub fn side(&self) -> usize {
        self.fft.n
    }

    pub fn dimension(&self) -> usize {
        self.fft.d
    }

    pub fn symmetry(&self) -> &SymmetryIndex {
        &self.symmetry
    }

    pub fn multiplier_grid(&self, multiplier: &Multiplier) -> Result<MultiplierGrid> {
        MultiplierGrid::evaluate(multiplier, &self.symmetry)
    }

    fn periodic_index(&self, n: &[i64]) -> usize {
        let side = self.fft.n as i64;
        n.iter()
            .fold(0usize, |a, &c| a * self.fft.n + c.rem_euclid(side) as usize)
    }

    /// `f̂` on the grid.
    pub fn spectrum(&self, f: &GridFunction) -> Result<Vec<Complex64>> {
        if f.dimension() != self.fft.d || f.side() > self.fft.n {
            return Err(Error::invalid("function does not fit the frequency grid"));
        }
        let mut data = vec![Complex64::new(0.0, 0.0); self.fft.cells()];
        for (n, v) in f.support() {
            data[self.periodic_index(&n)] += v;
        }
        self.fft.forward(&mut data);
        Ok(data)
    }

    /// Inverse transform of `m · f̂`, read off on the centred box of side
    /// `output_side`.
    pub fn apply(&self, spectrum: &[Complex64], grid: &MultiplierGrid, output_side: usize) -> Result<MultiplierOutput> {
        if grid.n != self.fft.n || spectrum.len() != self.fft.cells() {
            return Err(Error::invalid("spectrum or multiplier grid has the wrong size"));
        }
        if output_side > self.fft.n || output_side % 2 == 0 {
            return Err(Error::invalid("output side must be odd and at most the grid side"));
        }
        let mut data: Vec<Complex64> = spectrum
            .iter()
            .zip(&self.symmetry.cell_key)
            .map(|(s, &key)| s * grid.values[key as usize])
            .collect();
        self.fft.inverse(&mut data);
        let mut output = GridFunction::zeros(self.fft.d, output_side)?;
        let mut imag_residual = 0.0f64;
        let mut inside = vec![false; data.len()];
        let mut c = vec![0i64; self.fft.d];
        for idx in 0..output.len() {
            output.coords_into(idx, &mut c);
            let cell = self.periodic_index(&c);
            inside[cell] = true;
            let v = data[cell];
            output.values_mut()[idx] = v.re;
            imag_residual = imag_residual.max(v.im.abs());
        }
        let spill = data
            .iter()
            .zip(&inside)
            .filter(|(_, &inside)| !inside)
            .map(|(v, _)| v.norm())
            .fold(0.0, f64::max);
        Ok(MultiplierOutput {
            output,
            imag_residual,
            spill,
            fft_side: self.fft.n,
        })
    }
}

/// Grid and output sizes for [`apply_multiplier`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierOptions {
    /// FFT side `N` (odd); default: smallest 3·5·7-smooth odd `N ≥` output side
    pub fft_side: Option<usize>,
    /// default: `f.side() + 2⌈√λ⌉`
    pub output_side: Option<usize>,
    pub cell_budget: u128,
}

impl Default for FourierOptions {
    fn default() -> Self {
        FourierOptions {
            fft_side: None,
            output_side: None,
            cell_budget: DEFAULT_CELL_BUDGET,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MultiplierOutput {
    /// real part of the discretized operator on the output box
    pub output: GridFunction,
    /// `max |Im|` on the output box; rounding noise for real symmetric pieces
    pub imag_residual: f64,
    /// `max |value|` on grid cells outside the output box: the size of the
    /// kernel tail that the box misses and that wraps around the grid
    pub spill: f64,
    pub fft_side: usize,
}

/// Requires `N ≥ output side ≥ f.side()`.
pub fn apply_multiplier(f: &GridFunction, multiplier: &Multiplier, options: &FourierOptions) -> Result<MultiplierOutput> {
    let lambda = multiplier.spec().lambda;
    let output_side = options
        .output_side
        .unwrap_or_else(|| f.side() + 2 * ceil_sqrt(lambda) as usize);
    if output_side < f.side() {
        return Err(Error::invalid("output box must contain the support of f"));
    }
    let n = options.fft_side.unwrap_or_else(|| smooth_fft_side(output_side));
    if n < output_side {
        return Err(Error::invalid(format!(
            "FFT side {n} is smaller than the output side {output_side}"
        )));
    }
    let ctx = FourierContext::new(f.dimension(), n, options.cell_budget)?;
    let grid = ctx.multiplier_grid(multiplier)?;
    let spectrum = ctx.spectrum(f)?;
    ctx.apply(&spectrum, &grid, output_side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeBudget;
    use crate::multiplier::{MultiplierSpec, Piece};
    use crate::operators::average::spherical_average;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn smooth_sides() {
        assert_eq!(smooth_fft_side(41), 45);
        assert_eq!(smooth_fft_side(44), 45);
        assert_eq!(smooth_fft_side(1), 1);
        assert_eq!(smooth_fft_side(50), 63);
    }

    #[test]
    fn fft_round_trip_and_delta() {
        let g = FftGrid::new(3, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let orig: Vec<Complex64> = (0..125)
            .map(|_| Complex64::new(rng.gen(), rng.gen()))
            .collect();
        let mut data = orig.clone();
        g.forward(&mut data);
        g.inverse(&mut data);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
        // δ at n = (0,0,1): x̂(k) = e(-k_3/5)
        let mut data = vec![Complex64::new(0.0, 0.0); 125];
        data[1] = Complex64::new(1.0, 0.0);
        g.forward(&mut data);
        for (idx, v) in data.iter().enumerate() {
            let k3 = (idx % 5) as f64;
            assert!((v - crate::arith::e(-k3 / 5.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn orbits_partition_the_grid() {
        let s = SymmetryIndex::new(4, 9).unwrap();
        assert_eq!(s.orbit_sizes().iter().sum::<u64>(), 9u64.pow(4));
        assert_eq!(s.key_count(), 70); // C(5 + 3, 4)
        assert_eq!(s.orbit_sizes()[0], 1);
    }

    #[test]
    fn discrete_piece_reproduces_spatial_average() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = GridFunction::from_fn(4, 5, |_| rng.gen_range(-1.0..1.0)).unwrap();
        for lambda in [3u64, 6] {
            let exact = spherical_average(&f, lambda).unwrap();
            let m = Multiplier::new(MultiplierSpec::new(4, lambda, Piece::Discrete), &LatticeBudget::default()).unwrap();
            let out = apply_multiplier(&f, &m, &FourierOptions::default()).unwrap();
            assert_eq!(out.output.side(), exact.side());
            for (a, b) in out.output.values().iter().zip(exact.values()) {
                assert!((a - b).abs() < 1e-12);
            }
            assert!(out.spill < 1e-12 && out.imag_residual < 1e-12);
        }
    }

    #[test]
    fn error_piece_has_zero_mean() {
        let delta = GridFunction::delta(4, 1).unwrap();
        let m = Multiplier::new(MultiplierSpec::new(4, 7, Piece::Error), &LatticeBudget::default()).unwrap();
        let n = 15;
        let out = apply_multiplier(
            &delta,
            &m,
            &FourierOptions {
                fft_side: Some(n),
                output_side: Some(n),
                ..FourierOptions::default()
            },
        )
        .unwrap();
        let total: f64 = out.output.values().iter().sum();
        assert!(total.abs() < 1e-12, "{total}");
    }
}
