//! Experiment configuration: one TOML file with a section per experiment.
//! Every field has a default, so an empty file is a valid configuration.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::multiplier::{LowScale, MainNormalization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Count,
    Kloosterman,
    RhoSum,
    SurfaceDecay,
    ErrorDecay,
    Split,
    WeakType,
    Exponents,
    Fixtures,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::Count,
        Experiment::Kloosterman,
        Experiment::RhoSum,
        Experiment::SurfaceDecay,
        Experiment::ErrorDecay,
        Experiment::Split,
        Experiment::WeakType,
        Experiment::Exponents,
        Experiment::Fixtures,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Count => "count",
            Experiment::Kloosterman => "kloosterman",
            Experiment::RhoSum => "rho-sum",
            Experiment::SurfaceDecay => "surface-decay",
            Experiment::ErrorDecay => "error-decay",
            Experiment::Split => "split",
            Experiment::WeakType => "weak-type",
            Experiment::Exponents => "exponents",
            Experiment::Fixtures => "fixtures",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config {
                field: "experiment".into(),
                message: format!("unknown experiment `{s}`"),
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CountConfig {
    pub dims: Vec<usize>,
    /// enumeration vs convolution for `λ ≤ enumeration_max`
    pub enumeration_max: u64,
    /// convolution vs Jacobi (`d = 4`) for `λ ≤ jacobi_max`
    pub jacobi_max: u64,
    pub hl_min: u64,
    pub hl_max: u64,
    pub hl_slack: f64,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig {
            dims: vec![4, 5],
            enumeration_max: 500,
            jacobi_max: 2000,
            hl_min: 100,
            hl_max: 10_000,
            hl_slack: 0.15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KloostermanConfig {
    pub dims: Vec<usize>,
    /// factored vs brute force for every `q ≤ oracle_q_max`
    pub oracle_q_max: u64,
    pub pairs_per_q: usize,
    pub oracle_lambda_max: u64,
    pub sweep_min: u64,
    pub sweep_max: u64,
    pub sweep_stride: u64,
    pub slack: f64,
    pub sup_q_max: u64,
    pub sup_lambdas: Vec<u64>,
    pub sup_l_samples: usize,
}

impl Default for KloostermanConfig {
    fn default() -> Self {
        KloostermanConfig {
            dims: vec![4, 5],
            oracle_q_max: 24,
            pairs_per_q: 20,
            oracle_lambda_max: 10_000,
            sweep_min: 100,
            sweep_max: 10_000,
            sweep_stride: 1,
            slack: 0.15,
            sup_q_max: 50,
            sup_lambdas: (3..=199).step_by(4).collect(),
            sup_l_samples: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RhoSumConfig {
    /// `0`, `-3/2`, and `(1 - d)/2` for `d = 5`
    pub betas: Vec<f64>,
    pub lambda_min: u64,
    pub lambda_max: u64,
    /// log-spaced sample count
    pub points: usize,
    pub slack: f64,
}

impl Default for RhoSumConfig {
    fn default() -> Self {
        RhoSumConfig {
            betas: vec![0.0, -1.5, -2.0],
            lambda_min: 100,
            lambda_max: 1_000_000,
            points: 81,
            slack: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurfaceDecayConfig {
    pub dims: Vec<usize>,
    pub lambdas: Vec<f64>,
    pub r_min: f64,
    pub r_max: f64,
    /// log-spaced radii
    pub radii: usize,
    pub directions: usize,
    pub slack: f64,
}

impl Default for SurfaceDecayConfig {
    fn default() -> Self {
        SurfaceDecayConfig {
            dims: vec![3, 4, 5],
            lambdas: vec![1.0, 4.0, 9.0],
            r_min: 1.0,
            r_max: 100.0,
            radii: 30,
            directions: 4,
            slack: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ErrorDecayConfig {
    pub d: usize,
    pub sequence_seed: u64,
    pub sequence_count: usize,
    pub grid_resolution: usize,
    pub rational_l_per_q: usize,
    pub random_points: usize,
    pub normalization: MainNormalization,
    pub slack: f64,
}

impl Default for ErrorDecayConfig {
    fn default() -> Self {
        ErrorDecayConfig {
            d: 4,
            sequence_seed: 1,
            sequence_count: 13,
            grid_resolution: 8,
            rational_l_per_q: 4,
            random_points: 1024,
            normalization: MainNormalization::default(),
            slack: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    pub d: usize,
    pub side: usize,
    pub sets: usize,
    pub max_set_size: usize,
    pub sequence_seed: u64,
    pub sequence_count: usize,
    pub alphas: Vec<f64>,
    pub fft_side: Option<usize>,
    pub low_scale: LowScale,
    /// allowed distance of the ratio trend slopes from the predicted ones
    pub trend_tolerance: f64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            d: 4,
            side: 33,
            sets: 10,
            max_set_size: 64,
            sequence_seed: 1,
            sequence_count: 4,
            alphas: vec![1.0, 2.0, 3.0, 4.0],
            fft_side: None,
            low_scale: LowScale::default(),
            trend_tolerance: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeakTypeConfig {
    pub d: usize,
    pub sides: Vec<usize>,
    pub sets: usize,
    pub max_set_size: usize,
    pub sequence_seed: u64,
    pub sequence_count: usize,
    /// allowed growth of the max ratio from one box side to the next
    pub growth_limit: f64,
}

impl Default for WeakTypeConfig {
    fn default() -> Self {
        WeakTypeConfig {
            d: 4,
            sides: vec![33, 65],
            sets: 20,
            max_set_size: 64,
            sequence_seed: 1,
            sequence_count: 4,
            growth_limit: 1.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExponentsConfig {
    pub d_min: usize,
    pub d_max: usize,
}

impl Default for ExponentsConfig {
    fn default() -> Self {
        ExponentsConfig { d_min: 4, d_max: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FixtureMode {
    /// freeze missing names, check existing ones
    #[default]
    Record,
    Check,
    /// overwrite every stored value
    Freeze,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FixturesConfig {
    pub path: PathBuf,
    pub mode: FixtureMode,
    pub tol: f64,
}

impl Default for FixturesConfig {
    fn default() -> Self {
        FixturesConfig {
            path: PathBuf::from("crates/core/tests/fixtures/values.json"),
            mode: FixtureMode::default(),
            tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub seed: u64,
    /// worker threads; default: available cores
    pub jobs: Option<usize>,
    /// output directory; default `results`
    pub out: Option<PathBuf>,
    /// cap on lattice points or frequency-grid cells an experiment allocates
    pub budget: Option<u64>,
    /// overrides the slope slack of decay experiments
    pub tol: Option<f64>,
    pub count: CountConfig,
    pub kloosterman: KloostermanConfig,
    #[serde(rename = "rho-sum")]
    pub rho_sum: RhoSumConfig,
    #[serde(rename = "surface-decay")]
    pub surface_decay: SurfaceDecayConfig,
    #[serde(rename = "error-decay")]
    pub error_decay: ErrorDecayConfig,
    pub split: SplitConfig,
    #[serde(rename = "weak-type")]
    pub weak_type: WeakTypeConfig,
    pub exponents: ExponentsConfig,
    pub fixtures: FixturesConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: 1,
            jobs: None,
            out: None,
            budget: None,
            tol: None,
            count: CountConfig::default(),
            kloosterman: KloostermanConfig::default(),
            rho_sum: RhoSumConfig::default(),
            surface_decay: SurfaceDecayConfig::default(),
            error_decay: ErrorDecayConfig::default(),
            split: SplitConfig::default(),
            weak_type: WeakTypeConfig::default(),
            exponents: ExponentsConfig::default(),
            fixtures: FixturesConfig::default(),
        }
    }
}

fn invalid(field: &str, message: impl Into<String>) -> Error {
    Error::Config {
        field: field.to_string(),
        message: message.into(),
    }
}

impl SweepConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: SweepConfig = toml::from_str(text).map_err(|e| Error::Config {
            field: e.span().map_or_else(
                || "<file>".to_string(),
                |s| {
                    let line = text[..s.start].matches('\n').count() + 1;
                    format!("line {line}: {}", &text[s.start..s.end])
                },
            ),
            message: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }

    /// SHA-256 of the TOML form, ignoring `jobs` and `out`, which do not
    /// affect results.
    pub fn hash(&self) -> Result<String> {
        let mut canonical = self.clone();
        canonical.jobs = None;
        canonical.out = None;
        let digest = Sha256::digest(canonical.to_toml()?.as_bytes());
        Ok(hex::encode(digest))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("results"))
    }

    /// Slack for a decay fit, honouring the global `tol` override.
    pub fn slack(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    pub fn validate(&self) -> Result<()> {
        if self.jobs == Some(0) {
            return Err(invalid("jobs", "must be positive"));
        }
        if self.budget == Some(0) {
            return Err(invalid("budget", "must be positive"));
        }
        if let Some(t) = self.tol {
            if !(t >= 0.0) {
                return Err(invalid("tol", "must be nonnegative"));
            }
        }
        let c = &self.count;
        if c.dims.is_empty() || c.dims.iter().any(|&d| !(4..=8).contains(&d)) {
            return Err(invalid("count.dims", "dimensions must be in 4..=8 and nonempty"));
        }
        if c.hl_min == 0 || c.hl_min >= c.hl_max {
            return Err(invalid("count.hl_min", "need 1 ≤ hl_min < hl_max"));
        }
        let k = &self.kloosterman;
        if k.dims.is_empty() || k.oracle_q_max == 0 || k.pairs_per_q == 0 {
            return Err(invalid("kloosterman", "dims, oracle_q_max and pairs_per_q must be nonempty/positive"));
        }
        if k.sweep_min == 0 || k.sweep_min >= k.sweep_max || k.sweep_stride == 0 {
            return Err(invalid("kloosterman.sweep_min", "need 1 ≤ sweep_min < sweep_max and stride ≥ 1"));
        }
        if k.sweep_max > 10_000 {
            return Err(invalid("kloosterman.sweep_max", "at most 10⁴"));
        }
        if k.sup_q_max > 200 || k.sup_lambdas.is_empty() {
            return Err(invalid("kloosterman.sup_q_max", "need sup_q_max ≤ 200 and some λ"));
        }
        let r = &self.rho_sum;
        if r.betas.is_empty() || r.points < 3 || r.lambda_min == 0 || r.lambda_min >= r.lambda_max || r.lambda_max > 1_000_000 {
            return Err(invalid("rho-sum", "need betas, ≥ 3 points and 1 ≤ lambda_min < lambda_max ≤ 10⁶"));
        }
        let s = &self.surface_decay;
        if s.dims.is_empty() || s.dims.iter().any(|&d| d < 2) || s.lambdas.iter().any(|&l| !(l > 0.0)) {
            return Err(invalid("surface-decay", "dims ≥ 2 and positive λ required"));
        }
        if !(s.r_min > 0.0 && s.r_min < s.r_max) || s.radii < 3 || s.directions == 0 {
            return Err(invalid("surface-decay.r_min", "need 0 < r_min < r_max, ≥ 3 radii, ≥ 1 direction"));
        }
        let e = &self.error_decay;
        if e.d < 4 || e.sequence_count < 3 || e.sequence_seed == 0 {
            return Err(invalid("error-decay", "need d ≥ 4, ≥ 3 radii, seed ≥ 1"));
        }
        let sp = &self.split;
        if sp.side % 2 == 0 || sp.sets == 0 || sp.max_set_size == 0 || sp.alphas.is_empty() {
            return Err(invalid("split", "odd side and nonempty sets/alphas required"));
        }
        if sp.alphas.iter().any(|&a| !(a >= 1.0)) {
            return Err(invalid("split.alphas", "every α must be at least 1"));
        }
        let w = &self.weak_type;
        if w.sides.is_empty() || w.sides.iter().any(|s| s % 2 == 0) || w.sets == 0 || w.max_set_size == 0 {
            return Err(invalid("weak-type", "odd sides and nonempty sets required"));
        }
        let x = &self.exponents;
        if x.d_min < 4 || x.d_min > x.d_max {
            return Err(invalid("exponents.d_min", "need 4 ≤ d_min ≤ d_max"));
        }
        if !(self.fixtures.tol >= 0.0) {
            return Err(invalid("fixtures.tol", "must be nonnegative"));
        }
        Ok(())
    }
}
