//! Experiment reports: CSV rows, JSON fit and check summaries, provenance.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

use super::fit::SlopeFit;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub config_hash: String,
    pub version: String,
}

/// A fitted log-log slope compared against a predicted exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSummary {
    pub name: String,
    pub exponent_predicted: f64,
    pub slope_fitted: f64,
    pub intercept: f64,
    pub residual: f64,
    pub slack: f64,
    /// `true` for `|slope - predicted| ≤ slack`, `false` for an upper bound
    /// `slope ≤ predicted + slack`
    pub two_sided: bool,
    pub passed: bool,
    /// report-only fits never fail the run
    pub asserted: bool,
    pub seed: u64,
}

impl FitSummary {
    pub fn upper(name: impl Into<String>, predicted: f64, slack: f64, fit: SlopeFit, seed: u64) -> Self {
        Self::build(name.into(), predicted, slack, fit, seed, false)
    }

    pub fn two_sided(name: impl Into<String>, predicted: f64, slack: f64, fit: SlopeFit, seed: u64) -> Self {
        Self::build(name.into(), predicted, slack, fit, seed, true)
    }

    fn build(name: String, predicted: f64, slack: f64, fit: SlopeFit, seed: u64, two_sided: bool) -> Self {
        let passed = if two_sided {
            (fit.slope - predicted).abs() <= slack
        } else {
            fit.slope <= predicted + slack
        };
        FitSummary {
            name,
            exponent_predicted: predicted,
            slope_fitted: fit.slope,
            intercept: fit.intercept,
            residual: fit.residual,
            slack,
            two_sided,
            passed,
            asserted: true,
            seed,
        }
    }

    pub fn report_only(mut self) -> Self {
        self.asserted = false;
        self
    }
}

/// An exact or tolerance check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub asserted: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            asserted: true,
            detail: detail.into(),
        }
    }

    pub fn report_only(mut self) -> Self {
        self.asserted = false;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub experiment: String,
    pub columns: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<Vec<String>>,
    pub fits: Vec<FitSummary>,
    pub checks: Vec<Check>,
    pub provenance: Provenance,
}

impl Report {
    pub fn new(experiment: &str, columns: &[&str], provenance: Provenance) -> Self {
        Report {
            experiment: experiment.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            fits: Vec::new(),
            checks: Vec::new(),
            provenance,
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Every asserted fit and check passed.
    pub fn passed(&self) -> bool {
        self.fits.iter().filter(|f| f.asserted).all(|f| f.passed)
            && self.checks.iter().filter(|c| c.asserted).all(|c| c.passed)
    }

    /// Rows with `seed` and `config_hash` appended to each.
    pub fn csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = self.columns.clone();
        header.extend(["seed".to_string(), "config_hash".to_string()]);
        w.write_record(&header).map_err(crate::lattice::csv_err)?;
        let seed = self.provenance.seed.to_string();
        for row in &self.rows {
            let mut r = row.clone();
            r.push(seed.clone());
            r.push(self.provenance.config_hash.clone());
            w.write_record(&r).map_err(crate::lattice::csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn json_string(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    /// Writes `<experiment>.csv` and `<experiment>.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let csv_path = dir.join(format!("{}.csv", self.experiment));
        let json_path = dir.join(format!("{}.json", self.experiment));
        fs::write(&csv_path, self.csv_string()?).map_err(|e| Error::io(&csv_path, e))?;
        fs::write(&json_path, self.json_string()? + "\n").map_err(|e| Error::io(&json_path, e))?;
        Ok((csv_path, json_path))
    }

    /// One line per fit and check.
    pub fn summary_lines(&self) -> Vec<String> {
        let mark = |passed: bool, asserted: bool| match (passed, asserted) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "NOTE",
        };
        let mut out = Vec::new();
        for f in &self.fits {
            let relation = if f.two_sided { "within" } else { "≤" };
            out.push(format!(
                "[{}] {}: slope {:.4} {} {:.4} ± {:.2}{}",
                mark(f.passed, f.asserted),
                f.name,
                f.slope_fitted,
                relation,
                f.exponent_predicted,
                f.slack,
                if f.asserted { "" } else { " (report only)" }
            ));
        }
        for c in &self.checks {
            out.push(format!(
                "[{}] {}: {}{}",
                mark(c.passed, c.asserted),
                c.name,
                c.detail,
                if c.asserted { "" } else { " (report only)" }
            ));
        }
        out
    }
}
