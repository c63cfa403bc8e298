//! The `M_1 / M_2` decomposition of the linearized average `A_τ 1_F`.
//!
//! At a point `n` with `λ = λ_{τ(n)}`:
//!
//! ```text
//! √λ ≤ α:  M_{1,1} = |A_τ f|
//! √λ > α:  A_τ f = E_λ f + Σ_{α<q≤√λ} M^q_λ f + Σ_{q≤α} M^q_{λ,2} f + Σ_{q≤α} M^q_{λ,1} f
//!          M_{2,1} = |E_λ f|,  M_{2,2} = Σ_{α<q} |M^q_λ f|,
//!          M_{2,3} = |Σ_{q≤α} M^q_{λ,2} f|,  M_{1,2} = |Σ_{q≤α} M^q_{λ,1} f|
//! ```
//!
//! `M_1 = M_{1,1} + M_{1,2}`, `M_2 = M_{2,1} + M_{2,2} + M_{2,3}`; the
//! triangle inequality gives `|A_τ f| ≤ M_1 + M_2` up to the discretization
//! error of the reassembly.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::arith::{ceil_sqrt, floor_sqrt};
use crate::error::{Error, Result};
use crate::lattice::{LacunarySequence, LatticeBudget};
use crate::multiplier::{LowScale, MainNormalization, Multiplier, MultiplierSpec, Piece};

use super::average::{sequence_averages, StoppingTime};
use super::fourier::{smooth_fft_side, FourierContext, MultiplierGrid, DEFAULT_CELL_BUDGET};
use super::grid::GridFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct SplitParams {
    pub alpha: f64,
    pub sequence: LacunarySequence,
}

impl SplitParams {
    pub fn new(alpha: f64, sequence: LacunarySequence) -> Result<Self> {
        if !(alpha >= 1.0) {
            return Err(Error::invalid(format!("α must be at least 1, got {alpha}")));
        }
        Ok(SplitParams { alpha, sequence })
    }

    pub fn q_max(&self) -> u64 {
        self.alpha.floor() as u64
    }
}

#[derive(Debug, Clone)]
pub struct SplitPieces {
    pub alpha: f64,
    pub a_tau: GridFunction,
    pub m11: GridFunction,
    pub m12: GridFunction,
    pub m21: GridFunction,
    pub m22: GridFunction,
    pub m23: GridFunction,
    pub m1: GridFunction,
    pub m2: GridFunction,
    /// `max_n (|A_τ f(n)| - M_1(n) - M_2(n))`
    pub domination_excess: f64,
    /// `max |A_λ f - (E_λ f + Σ_q M^q_λ f)|` over the grid radii; the
    /// discretization error the domination check is measured against
    pub reassembly_error: f64,
    /// largest kernel mass missed by the output box over all pieces
    pub spill: f64,
    pub imag_residual: f64,
}

impl SplitPieces {
    pub fn dominated(&self) -> bool {
        self.domination_excess <= self.reassembly_error + 1e-12
    }
}

/// Reusable state for splitting many indicators against one sequence:
/// shares the frequency grid and caches multiplier grids per piece.
pub struct SplitWorkspace {
    d: usize,
    input_side: usize,
    output_side: usize,
    sequence: LacunarySequence,
    normalization: MainNormalization,
    low_scale: LowScale,
    ctx: FourierContext,
    grids: HashMap<(u64, Piece, u64, u64), MultiplierGrid>,
}

impl SplitWorkspace {
    /// Output box: `input_side + 2⌈√λ_max⌉`; FFT side: the smallest smooth
    /// odd size covering it unless `fft_side` is given.
    pub fn new(d: usize, input_side: usize, sequence: LacunarySequence, fft_side: Option<usize>) -> Result<Self> {
        Self::with_cell_budget(d, input_side, sequence, fft_side, DEFAULT_CELL_BUDGET)
    }

    pub fn with_cell_budget(
        d: usize,
        input_side: usize,
        sequence: LacunarySequence,
        fft_side: Option<usize>,
        cell_budget: u128,
    ) -> Result<Self> {
        let output_side = input_side + 2 * ceil_sqrt(sequence.max_radius()) as usize;
        let n = fft_side.unwrap_or_else(|| smooth_fft_side(output_side));
        if n < output_side {
            return Err(Error::invalid("FFT side smaller than the output box"));
        }
        Ok(SplitWorkspace {
            d,
            input_side,
            output_side,
            sequence,
            normalization: MainNormalization::default(),
            low_scale: LowScale::default(),
            ctx: FourierContext::new(d, n, cell_budget)?,
            grids: HashMap::new(),
        })
    }

    pub fn with_low_scale(mut self, scale: LowScale) -> Self {
        self.low_scale = scale;
        self.grids.clear();
        self
    }

    pub fn with_normalization(mut self, normalization: MainNormalization) -> Self {
        self.normalization = normalization;
        self.grids.clear();
        self
    }

    pub fn fft_side(&self) -> usize {
        self.ctx.side()
    }

    pub fn output_side(&self) -> usize {
        self.output_side
    }

    fn grid(&mut self, lambda: u64, piece: Piece, alpha: f64, q_max: u64) -> Result<&MultiplierGrid> {
        // α only matters for the low/high pieces
        let alpha_key = if matches!(piece, Piece::LowSum | Piece::HighSum | Piece::Low(_) | Piece::High(_)) {
            alpha.to_bits()
        } else {
            0
        };
        let key = (lambda, piece, alpha_key, q_max);
        if !self.grids.contains_key(&key) {
            let spec = MultiplierSpec::new(self.d, lambda, piece)
                .with_q_max(q_max)
                .with_alpha(alpha)
                .with_low_scale(self.low_scale)
                .with_normalization(self.normalization);
            let m = Multiplier::new(spec, &LatticeBudget::default())?;
            let grid = self.ctx.multiplier_grid(&m)?;
            self.grids.insert(key, grid);
        }
        Ok(&self.grids[&key])
    }

    fn apply(
        &mut self,
        spectrum: &[Complex64],
        lambda: u64,
        piece: Piece,
        alpha: f64,
        q_max: u64,
        stats: &mut (f64, f64),
    ) -> Result<GridFunction> {
        let side = self.output_side;
        let grid = self.grid(lambda, piece, alpha, q_max)?.clone();
        let out = self.ctx.apply(spectrum, &grid, side)?;
        stats.0 = stats.0.max(out.spill);
        stats.1 = stats.1.max(out.imag_residual);
        Ok(out.output)
    }

    /// Splits `f` (an indicator on the workspace input box) for one `α`.
    pub fn split(&mut self, f: &GridFunction, alpha: f64) -> Result<SplitPieces> {
        if f.dimension() != self.d || f.side() != self.input_side {
            return Err(Error::invalid("function does not match the workspace box"));
        }
        if f.values().iter().any(|&v| v != 0.0 && v != 1.0) {
            return Err(Error::invalid("split experiments take indicator functions"));
        }
        let params = SplitParams::new(alpha, self.sequence.clone())?;
        let q_low = params.q_max();
        let radii = self.sequence.radii().to_vec();
        let averages = sequence_averages(f, &self.sequence)?;
        let tau = StoppingTime::from_averages(&averages, &radii)?;
        let a_tau = tau.select(&averages)?;
        let spectrum = self.ctx.spectrum(f)?;

        let zeros = GridFunction::zeros(self.d, self.output_side)?;
        let (mut m11, mut m12, mut m21, mut m22, mut m23) =
            (zeros.clone(), zeros.clone(), zeros.clone(), zeros.clone(), zeros);
        let mut stats = (0.0f64, 0.0f64);
        let mut reassembly_error = 0.0f64;

        for (idx, &j) in tau.assignment().iter().enumerate() {
            if (radii[j as usize] as f64) <= alpha * alpha {
                m11.values_mut()[idx] = a_tau.values()[idx].abs();
            }
        }
        for (j, &lambda) in radii.iter().enumerate() {
            if (lambda as f64) <= alpha * alpha {
                continue;
            }
            let root = floor_sqrt(lambda);
            let error = self.apply(&spectrum, lambda, Piece::Error, alpha, root, &mut stats)?;
            let low_full = self.apply(&spectrum, lambda, Piece::FullMain, alpha, q_low, &mut stats)?;
            let low = self.apply(&spectrum, lambda, Piece::LowSum, alpha, q_low, &mut stats)?;
            let mut tail_abs = vec![0.0; self.output_side.pow(self.d as u32)];
            let mut reassembled: Vec<f64> = error
                .values()
                .iter()
                .zip(low_full.values())
                .map(|(a, b)| a + b)
                .collect();
            for q in q_low + 1..=root {
                let slice = self.apply(&spectrum, lambda, Piece::QSlice(q), alpha, root, &mut stats)?;
                for (i, v) in slice.values().iter().enumerate() {
                    tail_abs[i] += v.abs();
                    reassembled[i] += v;
                }
            }
            for (r, a) in reassembled.iter().zip(averages[j].values()) {
                reassembly_error = reassembly_error.max((r - a).abs());
            }
            for (idx, &tj) in tau.assignment().iter().enumerate() {
                if tj as usize != j {
                    continue;
                }
                let l = low.values()[idx];
                m21.values_mut()[idx] = error.values()[idx].abs();
                m22.values_mut()[idx] = tail_abs[idx];
                m23.values_mut()[idx] = (low_full.values()[idx] - l).abs();
                m12.values_mut()[idx] = l.abs();
            }
        }

        let add = |a: &GridFunction, b: &GridFunction| -> Result<GridFunction> {
            GridFunction::from_values(
                a.dimension(),
                a.side(),
                a.values().iter().zip(b.values()).map(|(x, y)| x + y).collect(),
            )
        };
        let m1 = add(&m11, &m12)?;
        let m2 = add(&add(&m21, &m22)?, &m23)?;
        let domination_excess = a_tau
            .values()
            .iter()
            .zip(m1.values().iter().zip(m2.values()))
            .map(|(a, (x, y))| a.abs() - x - y)
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(SplitPieces {
            alpha,
            a_tau,
            m11,
            m12,
            m21,
            m22,
            m23,
            m1,
            m2,
            domination_excess,
            reassembly_error,
            spill: stats.0,
            imag_residual: stats.1,
        })
    }
}

/// One-shot split of `1_F`.
pub fn m1_m2_split(f: &GridFunction, params: &SplitParams) -> Result<SplitPieces> {
    let mut ws = SplitWorkspace::new(f.dimension(), f.side(), params.sequence.clone(), None)?;
    ws.split(f, params.alpha)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadicErrorSup {
    pub value: f64,
    pub radii: Vec<u64>,
}

/// `‖max_{λ ∈ radii} |E_λ f|‖_{l²}` over the whole periodic grid of side
/// `fft_side`, the Riemann-sum discretization of the `l²(Z^d)` norm.
pub fn error_sup_l2(f: &GridFunction, radii: &[u64], fft_side: usize) -> Result<f64> {
    if radii.is_empty() {
        return Ok(0.0);
    }
    let ctx = FourierContext::new(f.dimension(), fft_side, DEFAULT_CELL_BUDGET)?;
    let single_point = f.support().len() == 1;
    if single_point && radii.len() == 1 {
        let c = f.support()[0].1.abs();
        let spec = MultiplierSpec::new(f.dimension(), radii[0], Piece::Error);
        let m = Multiplier::new(spec, &LatticeBudget::default())?;
        return Ok(c * ctx.multiplier_grid(&m)?.l2_riemann(ctx.symmetry()));
    }
    let spectrum = ctx.spectrum(f)?;
    let mut sup = vec![0.0f64; fft_side.pow(f.dimension() as u32)];
    for &lambda in radii {
        let spec = MultiplierSpec::new(f.dimension(), lambda, Piece::Error);
        let m = Multiplier::new(spec, &LatticeBudget::default())?;
        let out = ctx.apply(&spectrum, &ctx.multiplier_grid(&m)?, fft_side)?;
        for (s, v) in sup.iter_mut().zip(out.output.values()) {
            *s = s.max(v.abs());
        }
    }
    Ok(sup.iter().map(|v| v * v).sum::<f64>().sqrt())
}

/// `‖sup_{Λ ≤ λ_j < 2Λ} |E_{λ_j} f|‖_{l²}`. A lacunary block holds at most
/// one radius; more is reported as an error.
pub fn dyadic_error_sup(f: &GridFunction, seq: &LacunarySequence, block_start: u64, fft_side: usize) -> Result<DyadicErrorSup> {
    let radii = seq.in_range(block_start, block_start.saturating_mul(2));
    if radii.len() > 1 {
        return Err(Error::invalid(format!(
            "dyadic block [{block_start}, {}) holds {} radii",
            2 * block_start,
            radii.len()
        )));
    }
    Ok(DyadicErrorSup {
        value: error_sup_l2(f, &radii, fft_side)?,
        radii,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_lacunary;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_indicator(rng: &mut ChaCha8Rng, d: usize, side: usize, size: usize) -> GridFunction {
        let h = (side / 2) as i64;
        let pts: Vec<Vec<i64>> = (0..size)
            .map(|_| (0..d).map(|_| rng.gen_range(-h..=h)).collect())
            .collect();
        GridFunction::indicator(d, side, &pts).unwrap()
    }

    #[test]
    fn domination_holds_on_small_boxes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let seq = make_lacunary(4, 1, 3).unwrap();
        let mut ws = SplitWorkspace::new(4, 5, seq, None).unwrap();
        for _ in 0..2 {
            let f = random_indicator(&mut rng, 4, 5, 6);
            for alpha in [1.0, 2.0] {
                let s = ws.split(&f, alpha).unwrap();
                assert!(s.dominated(), "excess {} vs {}", s.domination_excess, s.reassembly_error);
                assert!(s.reassembly_error < 1e-10);
            }
        }
    }

    #[test]
    fn large_alpha_leaves_only_the_first_piece() {
        let seq = make_lacunary(4, 1, 3).unwrap();
        let f = GridFunction::delta(4, 3).unwrap();
        let s = m1_m2_split(&f, &SplitParams::new(3.0, seq).unwrap()).unwrap();
        for (a, b) in s.m11.values().iter().zip(s.a_tau.values()) {
            assert_eq!(*a, b.abs());
        }
        assert!(s.m22.values().iter().all(|&v| v == 0.0));
        assert!(s.m2.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dyadic_blocks_and_monotonicity() {
        let seq = make_lacunary(4, 1, 4).unwrap();
        let f = GridFunction::delta(4, 1).unwrap();
        let block = dyadic_error_sup(&f, &seq, 6, 15).unwrap();
        assert_eq!(block.radii, vec![7]);
        let single = error_sup_l2(&f, &[7], 15).unwrap();
        assert!((block.value - single).abs() < 1e-15);
        // general path agrees with the Parseval shortcut
        let g = f.embed(3).unwrap();
        let spatial = {
            let ctx = FourierContext::new(4, 15, DEFAULT_CELL_BUDGET).unwrap();
            let m = Multiplier::new(MultiplierSpec::new(4, 7, Piece::Error), &LatticeBudget::default()).unwrap();
            let out = ctx.apply(&ctx.spectrum(&g).unwrap(), &ctx.multiplier_grid(&m).unwrap(), 15).unwrap();
            out.output.lp_norm(2.0).unwrap()
        };
        assert!((spatial - single).abs() < 1e-10);
        let two = error_sup_l2(&g, &[7, 15], 15).unwrap();
        assert!(two >= single - 1e-12);
        assert!(dyadic_error_sup(&f, &seq, 1000, 15).unwrap().radii.is_empty());
    }
}
