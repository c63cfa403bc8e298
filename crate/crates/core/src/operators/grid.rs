//! Finitely supported functions on `Z^d`, stored on an origin-centred cube of
//! odd side and zero-extended outside it.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar types a [`GridFunction`] can hold.
pub trait GridValue: Copy + Default + Send + Sync + PartialEq + std::fmt::Debug + 'static {
    /// Tag written into the binary header.
    const TYPE_TAG: u64;
    const WORDS: usize;
    fn modulus(self) -> f64;
    fn write_words(self, out: &mut Vec<u8>);
    fn read_words(words: &[f64]) -> Self;
}

impl GridValue for f64 {
    const TYPE_TAG: u64 = 0;
    const WORDS: usize = 1;
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn write_words(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }
    fn read_words(words: &[f64]) -> Self {
        words[0]
    }
}

impl GridValue for Complex64 {
    const TYPE_TAG: u64 = 1;
    const WORDS: usize = 2;
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn write_words(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.re.to_le_bytes());
        out.extend_from_slice(&self.im.to_le_bytes());
    }
    fn read_words(words: &[f64]) -> Self {
        Complex64::new(words[0], words[1])
    }
}

/// Values on `{-h, …, h}^d` with `h = (side - 1)/2`, row-major with the last
/// coordinate fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T: GridValue = f64> {
    d: usize,
    side: usize,
    values: Vec<T>,
}

impl<T: GridValue> GridFunction<T> {
    pub fn zeros(d: usize, side: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("grid dimension must be positive"));
        }
        if side % 2 == 0 {
            return Err(Error::invalid(format!("grid side must be odd, got {side}")));
        }
        let len = side
            .checked_pow(d as u32)
            .ok_or_else(|| Error::invalid("grid too large"))?;
        Ok(GridFunction {
            d,
            side,
            values: vec![T::default(); len],
        })
    }

    pub fn from_values(d: usize, side: usize, values: Vec<T>) -> Result<Self> {
        let mut g = Self::zeros(d, side)?;
        if values.len() != g.values.len() {
            return Err(Error::invalid(format!(
                "expected {} values, got {}",
                g.values.len(),
                values.len()
            )));
        }
        g.values = values;
        Ok(g)
    }

    pub fn from_fn(d: usize, side: usize, mut f: impl FnMut(&[i64]) -> T) -> Result<Self> {
        let mut g = Self::zeros(d, side)?;
        let mut c = vec![0i64; d];
        for idx in 0..g.values.len() {
            g.coords_into(idx, &mut c);
            g.values[idx] = f(&c);
        }
        Ok(g)
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn half(&self) -> i64 {
        (self.side / 2) as i64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn contains(&self, n: &[i64]) -> bool {
        let h = self.half();
        n.iter().all(|&c| -h <= c && c <= h)
    }

    pub fn index_of(&self, n: &[i64]) -> Option<usize> {
        if n.len() != self.d || !self.contains(n) {
            return None;
        }
        let h = self.half();
        Some(n.iter().fold(0usize, |acc, &c| acc * self.side + (c + h) as usize))
    }

    pub fn coords_into(&self, mut idx: usize, out: &mut [i64]) {
        let h = self.half();
        for slot in out.iter_mut().rev() {
            *slot = (idx % self.side) as i64 - h;
            idx /= self.side;
        }
    }

    pub fn coords_of(&self, idx: usize) -> Vec<i64> {
        let mut c = vec![0; self.d];
        self.coords_into(idx, &mut c);
        c
    }

    /// Zero outside the box.
    pub fn get(&self, n: &[i64]) -> T {
        self.index_of(n).map_or_else(T::default, |i| self.values[i])
    }

    pub fn set(&mut self, n: &[i64], value: T) -> Result<()> {
        let i = self
            .index_of(n)
            .ok_or_else(|| Error::invalid(format!("point {n:?} outside the box of side {}", self.side)))?;
        self.values[i] = value;
        Ok(())
    }

    /// The same function on a box of side `side ≥ self.side`.
    pub fn embed(&self, side: usize) -> Result<Self> {
        if side < self.side {
            return Err(Error::invalid("embed target must not be smaller"));
        }
        let mut out = Self::zeros(self.d, side)?;
        let mut c = vec![0i64; self.d];
        for (idx, &v) in self.values.iter().enumerate() {
            if v != T::default() {
                self.coords_into(idx, &mut c);
                let j = out.index_of(&c).expect("inside larger box");
                out.values[j] = v;
            }
        }
        Ok(out)
    }

    /// Restriction to a smaller centred box.
    pub fn restrict(&self, side: usize) -> Result<Self> {
        if side > self.side {
            return Err(Error::invalid("restrict target must not be larger"));
        }
        Self::from_fn(self.d, side, |c| self.get(c))
    }

    /// Points where the value is nonzero, with their values.
    pub fn support(&self) -> Vec<(Vec<i64>, T)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != T::default())
            .map(|(i, &v)| (self.coords_of(i), v))
            .collect()
    }

    pub fn map<U: GridValue>(&self, f: impl Fn(T) -> U) -> GridFunction<U> {
        GridFunction {
            d: self.d,
            side: self.side,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `|f|` pointwise.
    pub fn abs(&self) -> GridFunction<f64> {
        self.map(T::modulus)
    }

    /// `‖f‖_{l^p(Z^d)}` for `p ≥ 1` or `p = ∞`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_infinite() && p > 0.0 {
            return Ok(self.values.iter().map(|v| v.modulus()).fold(0.0, f64::max));
        }
        if !(p >= 1.0) {
            return Err(Error::invalid(format!("l^p norm needs p ≥ 1, got {p}")));
        }
        let sum: f64 = self.values.iter().map(|v| v.modulus().powf(p)).sum();
        Ok(sum.powf(1.0 / p))
    }

    /// `|{n : |f(n)| > β}|`.
    pub fn distribution_level(&self, beta: f64) -> Result<u64> {
        if !(beta > 0.0) {
            return Err(Error::invalid("level β must be positive"));
        }
        Ok(self.values.iter().filter(|v| v.modulus() > beta).count() as u64)
    }

    /// Header `d, side, type` as little-endian `u64`, then the values as
    /// little-endian `f64` (real and imaginary parts interleaved).
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        let mut buf = Vec::with_capacity(24 + 8 * T::WORDS * self.values.len());
        for h in [self.d as u64, self.side as u64, T::TYPE_TAG] {
            buf.extend_from_slice(&h.to_le_bytes());
        }
        for &v in &self.values {
            v.write_words(&mut buf);
        }
        out.write_all(&buf).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let mut bytes = Vec::new();
        input
            .read_to_end(&mut bytes)
            .map_err(|e| Error::Format(e.to_string()))?;
        if bytes.len() < 24 {
            return Err(Error::Format("truncated grid header".into()));
        }
        let word = |i: usize| u64::from_le_bytes(bytes[8 * i..8 * i + 8].try_into().expect("8 bytes"));
        let (d, side, tag) = (word(0) as usize, word(1) as usize, word(2));
        if tag != T::TYPE_TAG {
            return Err(Error::Format(format!("value type tag {tag}, expected {}", T::TYPE_TAG)));
        }
        let floats: Vec<f64> = bytes[24..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        if bytes[24..].len() % 8 != 0 || floats.len() % T::WORDS != 0 {
            return Err(Error::Format("grid payload is not a whole number of values".into()));
        }
        let values = floats.chunks_exact(T::WORDS).map(T::read_words).collect();
        Self::from_values(d, side, values).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn save_binary(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_binary(BufWriter::new(file))
    }

    pub fn load_binary(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_binary(BufReader::new(file))
    }
}

impl GridFunction<f64> {
    /// `δ_0`.
    pub fn delta(d: usize, side: usize) -> Result<Self> {
        let mut g = Self::zeros(d, side)?;
        g.set(&vec![0; d], 1.0)?;
        Ok(g)
    }

    /// `1_F` for a set of points inside the box; repeated points count once.
    pub fn indicator(d: usize, side: usize, points: &[Vec<i64>]) -> Result<Self> {
        let mut g = Self::zeros(d, side)?;
        for p in points {
            g.set(p, 1.0)?;
        }
        Ok(g)
    }

    /// CSV with columns `n1..nd,value`, nonzero entries only.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (1..=self.d).map(|i| format!("n{i}")).collect();
        header.push("value".into());
        w.write_record(&header).map_err(crate::lattice::csv_err)?;
        for (c, v) in self.support() {
            let mut row: Vec<String> = c.iter().map(i64::to_string).collect();
            row.push(format!("{v:e}"));
            w.write_record(&row).map_err(crate::lattice::csv_err)?;
        }
        w.flush().map_err(|e| Error::Format(e.to_string()))
    }
}
