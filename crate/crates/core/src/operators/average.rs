//! Exact spatial averages `A_λ f(n) = N(λ)^{-1} Σ_{|m|²=λ} f(n - m)`, the
//! lacunary maximal function and its stopping-time linearization.

use rayon::prelude::*;

use crate::arith::ceil_sqrt;
use crate::error::{Error, Result};
use crate::lattice::{enumerate_sphere_with, is_admissible, LacunarySequence, LatticeBudget, SphereShell};

use super::grid::GridFunction;

/// Side of the box that holds `A_λ f` exactly when `f` lives on `side`.
pub fn average_output_side(side: usize, lambda: u64) -> usize {
    side + 2 * ceil_sqrt(lambda) as usize
}

/// `A_λ f` on the enlarged box, by scattering each nonzero value of `f`
/// onto its translated shell.
pub fn spherical_average_with(f: &GridFunction, shell: &SphereShell, out_side: usize) -> Result<GridFunction> {
    let d = f.dimension();
    if shell.dimension() != d {
        return Err(Error::invalid("shell and grid dimensions differ"));
    }
    if out_side < average_output_side(f.side(), shell.lambda()) {
        return Err(Error::invalid("output box too small for an exact average"));
    }
    let mut out = GridFunction::zeros(d, out_side)?;
    let weight = 1.0 / shell.count() as f64;
    let mut target = vec![0i64; d];
    for (n, v) in f.support() {
        let w = v * weight;
        for m in shell.points() {
            for i in 0..d {
                target[i] = n[i] + m[i];
            }
            let idx = out.index_of(&target).expect("output box covers the shell");
            out.values_mut()[idx] += w;
        }
    }
    Ok(out)
}

/// `A_λ f` on a box of side `f.side() + 2⌈√λ⌉`; exact on `Z^d`.
pub fn spherical_average(f: &GridFunction, lambda: u64) -> Result<GridFunction> {
    let d = f.dimension();
    if !is_admissible(d, lambda) {
        return Err(Error::invalid(format!("λ = {lambda} is not admissible in d = {d}")));
    }
    let shell = enumerate_sphere_with(d, lambda, &LatticeBudget::default())?;
    spherical_average_with(f, &shell, average_output_side(f.side(), lambda))
}

/// `A_{λ_j} f` for every radius of the sequence, all on the common box of
/// side `f.side() + 2⌈√λ_max⌉`.
pub fn sequence_averages(f: &GridFunction, seq: &LacunarySequence) -> Result<Vec<GridFunction>> {
    let d = f.dimension();
    if seq.dimension() != d {
        return Err(Error::invalid("sequence and grid dimensions differ"));
    }
    let side = average_output_side(f.side(), seq.max_radius());
    seq.radii()
        .par_iter()
        .map(|&lambda| {
            if !is_admissible(d, lambda) {
                return Err(Error::invalid(format!("λ = {lambda} is not admissible in d = {d}")));
            }
            let shell = enumerate_sphere_with(d, lambda, &LatticeBudget::default())?;
            spherical_average_with(f, &shell, side)
        })
        .collect()
}

fn pointwise_max(averages: &[GridFunction]) -> Result<GridFunction> {
    let first = &averages[0];
    let mut out = first.abs();
    for a in &averages[1..] {
        for (o, v) in out.values_mut().iter_mut().zip(a.values()) {
            *o = o.max(v.abs());
        }
    }
    Ok(out)
}

/// `M_lac f = max_j |A_{λ_j} f|`.
pub fn lacunary_maximal(f: &GridFunction, seq: &LacunarySequence) -> Result<GridFunction> {
    pointwise_max(&sequence_averages(f, seq)?)
}

/// `τ(n)`: 0-based index into the sequence of the radius attaining
/// `max_j |A_{λ_j} f(n)|`, smallest index on ties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoppingTime {
    d: usize,
    side: usize,
    assignment: Vec<u32>,
    radii: Vec<u64>,
}

impl StoppingTime {
    pub fn from_averages(averages: &[GridFunction], radii: &[u64]) -> Result<Self> {
        if averages.is_empty() || averages.len() != radii.len() {
            return Err(Error::invalid("one average per radius required"));
        }
        let (d, side) = (averages[0].dimension(), averages[0].side());
        if averages.iter().any(|a| a.dimension() != d || a.side() != side) {
            return Err(Error::invalid("averages must share a box"));
        }
        let assignment = (0..averages[0].len())
            .map(|i| {
                let mut best = 0u32;
                let mut best_value = averages[0].values()[i].abs();
                for (j, a) in averages.iter().enumerate().skip(1) {
                    let v = a.values()[i].abs();
                    if v > best_value {
                        best = j as u32;
                        best_value = v;
                    }
                }
                best
            })
            .collect();
        Ok(StoppingTime {
            d,
            side,
            assignment,
            radii: radii.to_vec(),
        })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    /// Index per box cell, in the cell order of [`GridFunction`].
    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub fn index_at(&self, idx: usize) -> usize {
        self.assignment[idx] as usize
    }

    pub fn radius_at(&self, idx: usize) -> u64 {
        self.radii[self.index_at(idx)]
    }

    /// `n ↦ g_{τ(n)}(n)` for a family of functions on the same box.
    pub fn select(&self, family: &[GridFunction]) -> Result<GridFunction> {
        if family.len() != self.radii.len() {
            return Err(Error::invalid("one function per radius required"));
        }
        if family.iter().any(|g| g.side() != self.side || g.dimension() != self.d) {
            return Err(Error::invalid("family must live on the stopping-time box"));
        }
        let values = self
            .assignment
            .iter()
            .enumerate()
            .map(|(i, &j)| family[j as usize].values()[i])
            .collect();
        GridFunction::from_values(self.d, self.side, values)
    }
}

pub fn stopping_time_linearize(f: &GridFunction, seq: &LacunarySequence) -> Result<StoppingTime> {
    StoppingTime::from_averages(&sequence_averages(f, seq)?, seq.radii())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_lacunary;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn delta_average_is_normalized_shell() {
        let delta = GridFunction::delta(4, 1).unwrap();
        let a = spherical_average(&delta, 1).unwrap();
        assert_eq!(a.side(), 3);
        let support = a.support();
        assert_eq!(support.len(), 8);
        for (c, v) in support {
            assert_eq!(c.iter().map(|x| x * x).sum::<i64>(), 1);
            assert_eq!(v, 0.125);
        }
    }

    #[test]
    fn constant_is_preserved_in_the_interior() {
        let one = GridFunction::from_fn(5, 7, |_| 1.0).unwrap();
        let a = spherical_average(&one, 2).unwrap();
        for idx in 0..a.len() {
            let c = a.coords_of(idx);
            if c.iter().all(|x| x.abs() <= 3 - 2) {
                assert!((a.values()[idx] - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = GridFunction::from_fn(4, 5, |_| rng.gen_range(-1.0..1.0)).unwrap();
        let g = GridFunction::from_fn(4, 5, |_| rng.gen_range(-1.0..1.0)).unwrap();
        let (a, b) = (0.3, -1.7);
        let combo = GridFunction::from_values(
            4,
            5,
            f.values().iter().zip(g.values()).map(|(x, y)| a * x + b * y).collect(),
        )
        .unwrap();
        let lhs = spherical_average(&combo, 6).unwrap();
        let (af, ag) = (spherical_average(&f, 6).unwrap(), spherical_average(&g, 6).unwrap());
        for i in 0..lhs.len() {
            let rhs = a * af.values()[i] + b * ag.values()[i];
            assert!((lhs.values()[i] - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn maximal_of_delta_and_stopping_time() {
        let seq = make_lacunary(4, 1, 3).unwrap(); // 1, 3, 7
        let delta = GridFunction::delta(4, 1).unwrap();
        let m = lacunary_maximal(&delta, &seq).unwrap();
        let tau = stopping_time_linearize(&delta, &seq).unwrap();
        let counts = [8.0, 32.0, 64.0];
        for idx in 0..m.len() {
            let c = m.coords_of(idx);
            let r: i64 = c.iter().map(|x| x * x).sum();
            match seq.radii().iter().position(|&l| l as i64 == r) {
                Some(j) => {
                    assert_eq!(m.values()[idx], 1.0 / counts[j]);
                    assert_eq!(tau.index_at(idx), j);
                }
                None => {
                    assert_eq!(m.values()[idx], 0.0);
                    assert_eq!(tau.index_at(idx), 0);
                }
            }
        }
    }
}
