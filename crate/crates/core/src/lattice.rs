//! Lattice points on spheres `|m|² = λ` in `Z^d`, representation counts and
//! lacunary radius sequences.

use std::io::Write;
use std::sync::OnceLock;

use crate::arith::{divisors, floor_sqrt};
use crate::error::{check_budget, Error, Result};

/// Largest `n` covered by the shared two-square table.
const R2_TABLE_LEN: usize = 1_000_001;

static R2_TABLE: OnceLock<Vec<u32>> = OnceLock::new();

fn r2_table() -> &'static [u32] {
    R2_TABLE.get_or_init(|| {
        let mut table = vec![0u32; R2_TABLE_LEN];
        let limit = floor_sqrt(R2_TABLE_LEN as u64 - 1) as i64;
        for x in -limit..=limit {
            let x2 = (x * x) as usize;
            for y in -limit..=limit {
                let n = x2 + (y * y) as usize;
                if n >= R2_TABLE_LEN {
                    if y > 0 {
                        break;
                    }
                    continue;
                }
                table[n] += 1;
            }
        }
        table
    })
}

/// Per-dimension caps on `λ` for enumeration; counting allows ten times more.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBudget {
    enumerate: [u64; 7],
}

impl Default for LatticeBudget {
    fn default() -> Self {
        LatticeBudget {
            // d = 2, 3, 4, 5, 6, 7, 8
            enumerate: [1_000_000, 100_000, 100_000, 10_000, 2_000, 500, 200],
        }
    }
}

impl LatticeBudget {
    pub fn with_enumeration_limit(mut self, d: usize, limit: u64) -> Self {
        if (2..=8).contains(&d) {
            self.enumerate[d - 2] = limit;
        }
        self
    }

    pub fn enumeration_limit(&self, d: usize) -> u64 {
        self.enumerate[d.clamp(2, 8) - 2]
    }

    pub fn count_limit(&self, d: usize) -> u64 {
        self.enumeration_limit(d).saturating_mul(10)
    }
}

fn check_dimension(d: usize) -> Result<()> {
    if (2..=8).contains(&d) {
        Ok(())
    } else {
        Err(Error::invalid(format!("dimension {d} outside 2..=8")))
    }
}

/// All `m ∈ Z^d` with `|m|² = λ`, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereShell {
    d: usize,
    lambda: u64,
    coords: Vec<i64>,
}

impl SphereShell {
    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    /// `N(λ)`.
    pub fn count(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[i64]> + '_ {
        self.coords.chunks_exact(self.d)
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    /// One row per point, columns `m1..md`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let header: Vec<String> = (1..=self.d).map(|i| format!("m{i}")).collect();
        w.write_record(&header).map_err(csv_err)?;
        for p in self.points() {
            w.write_record(p.iter().map(|c| c.to_string()))
                .map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Format(e.to_string()))?;
        Ok(())
    }
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn enumerate_sphere(d: usize, lambda: u64) -> Result<SphereShell> {
    enumerate_sphere_with(d, lambda, &LatticeBudget::default())
}

pub fn enumerate_sphere_with(d: usize, lambda: u64, budget: &LatticeBudget) -> Result<SphereShell> {
    check_dimension(d)?;
    check_budget(
        "sphere enumeration",
        lambda as u128,
        budget.enumeration_limit(d) as u128,
    )?;
    let mut coords = Vec::new();
    let mut current = vec![0i64; d];
    fill_shell(&mut current, 0, lambda as i64, &mut coords);
    Ok(SphereShell { d, lambda, coords })
}

fn fill_shell(current: &mut [i64], i: usize, remaining: i64, out: &mut Vec<i64>) {
    let d = current.len();
    if i + 1 == d {
        let r = floor_sqrt(remaining as u64) as i64;
        if r * r != remaining {
            return;
        }
        if r == 0 {
            current[i] = 0;
            out.extend_from_slice(current);
        } else {
            current[i] = -r;
            out.extend_from_slice(current);
            current[i] = r;
            out.extend_from_slice(current);
        }
        return;
    }
    let r = floor_sqrt(remaining as u64) as i64;
    for x in -r..=r {
        current[i] = x;
        fill_shell(current, i + 1, remaining - x * x, out);
    }
}

/// `r_k(n)` for all `n ≤ n_max`, built from the two-square table and
/// `r_k(n) = Σ_x r_{k-1}(n - x²)`.
pub fn representation_table(k: usize, n_max: u64) -> Vec<u64> {
    let len = n_max as usize + 1;
    match k {
        0 => {
            let mut t = vec![0; len];
            t[0] = 1;
            t
        }
        1 => {
            let mut t = vec![0; len];
            t[0] = 1;
            let mut x = 1usize;
            while x * x < len {
                t[x * x] = 2;
                x += 1;
            }
            t
        }
        2 => {
            if len <= R2_TABLE_LEN {
                r2_table()[..len].iter().map(|&c| c as u64).collect()
            } else {
                let r1 = representation_table(1, n_max);
                add_square(&r1)
            }
        }
        _ => add_square(&representation_table(k - 1, n_max)),
    }
}

fn add_square(prev: &[u64]) -> Vec<u64> {
    let len = prev.len();
    let mut next = vec![0u64; len];
    for (n, slot) in next.iter_mut().enumerate() {
        let mut acc = prev[n];
        let mut x = 1usize;
        while x * x <= n {
            acc += 2 * prev[n - x * x];
            x += 1;
        }
        *slot = acc;
    }
    next
}

/// `r_d(λ)` by convolving half-dimensional counts, without storing points.
pub fn count_representations(d: usize, lambda: u64) -> Result<u64> {
    count_representations_with(d, lambda, &LatticeBudget::default())
}

pub fn count_representations_with(d: usize, lambda: u64, budget: &LatticeBudget) -> Result<u64> {
    check_dimension(d)?;
    check_budget(
        "representation count",
        lambda as u128,
        budget.count_limit(d) as u128,
    )?;
    let lo = d / 2;
    let hi = d - lo;
    let a = representation_table(lo, lambda);
    let b = if hi == lo {
        None
    } else {
        Some(representation_table(hi, lambda))
    };
    let b = b.as_deref().unwrap_or(&a);
    let n = lambda as usize;
    Ok((0..=n).map(|k| a[k] * b[n - k]).sum())
}

/// Jacobi's four-square formula `r₄(n) = 8 Σ_{t | n, 4 ∤ t} t`.
pub fn r4_jacobi(lambda: u64) -> Result<u64> {
    if lambda == 0 {
        return Err(Error::invalid("r4_jacobi requires λ ≥ 1"));
    }
    Ok(8 * divisors(lambda)?
        .into_iter()
        .filter(|t| t % 4 != 0)
        .sum::<u64>())
}

/// `λ` is admissible when `d ≥ 5`, or `d = 4` and `4 ∤ λ`. Other
/// dimensions and `λ = 0` are never admissible.
pub fn is_admissible(d: usize, lambda: u64) -> bool {
    match d {
        _ if lambda == 0 => false,
        4 => lambda % 4 != 0,
        d => d >= 5,
    }
}

/// `N(λ) / λ^{d/2 - 1}`.
pub fn hl_ratio(d: usize, lambda: u64) -> Result<f64> {
    if lambda == 0 {
        return Err(Error::invalid("hl_ratio requires λ ≥ 1"));
    }
    let n = count_representations(d, lambda)?;
    Ok(n as f64 / (lambda as f64).powf(d as f64 / 2.0 - 1.0))
}

/// Strictly increasing radii-squared with `λ_{j+1} > 2 λ_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LacunarySequence {
    d: usize,
    radii: Vec<u64>,
    admissible_only: bool,
}

impl LacunarySequence {
    pub fn new(d: usize, radii: Vec<u64>, admissible_only: bool) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::invalid("lacunary sequence must be nonempty"));
        }
        if radii[0] == 0 {
            return Err(Error::invalid("radii must be positive"));
        }
        for w in radii.windows(2) {
            if w[1] <= 2 * w[0] {
                return Err(Error::invalid(format!(
                    "{} does not exceed twice {}",
                    w[1], w[0]
                )));
            }
        }
        if d == 4 && admissible_only {
            if let Some(bad) = radii.iter().find(|&&l| l % 4 == 0) {
                return Err(Error::invalid(format!("{bad} is divisible by 4")));
            }
        }
        Ok(LacunarySequence {
            d,
            radii,
            admissible_only,
        })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn radii(&self) -> &[u64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn admissible_only(&self) -> bool {
        self.admissible_only
    }

    pub fn max_radius(&self) -> u64 {
        *self.radii.last().expect("nonempty")
    }

    /// Radii falling in `[lo, hi)`.
    pub fn in_range(&self, lo: u64, hi: u64) -> Vec<u64> {
        self.radii
            .iter()
            .copied()
            .filter(|&l| l >= lo && l < hi)
            .collect()
    }
}

/// Greedy sequence: `λ_1` is the smallest admissible value `≥ seed`, then
/// each `λ_{j+1}` is the smallest admissible value `> 2 λ_j`.
pub fn make_lacunary(d: usize, seed: u64, count: usize) -> Result<LacunarySequence> {
    if seed == 0 || count == 0 {
        return Err(Error::invalid("make_lacunary requires seed ≥ 1 and count ≥ 1"));
    }
    let admissible = |l: u64| d != 4 || l % 4 != 0;
    let mut next = seed;
    let mut radii = Vec::with_capacity(count);
    for _ in 0..count {
        while !admissible(next) {
            next += 1;
        }
        radii.push(next);
        next = next
            .checked_mul(2)
            .and_then(|v| v.checked_add(1))
            .ok_or_else(|| Error::invalid("lacunary sequence overflows u64"))?;
    }
    LacunarySequence::new(d, radii, d == 4)
}
