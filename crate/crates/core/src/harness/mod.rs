//! Experiment harness: configuration, sweeps, slope fits, fixtures and
//! reports. The `lacunary-cli` binary is a thin front end over [`run`].

pub mod config;
pub mod experiments;
pub mod fit;
pub mod fixtures;
pub mod report;

pub use config::{Experiment, SweepConfig};
pub use experiments::run;
pub use fit::{fit_slope, SlopeFit};
pub use fixtures::{FixtureCheck, FixtureStore};
pub use report::{Check, FitSummary, Report};
