//! Discrete lacunary spherical maximal functions on `Z^d`.
//!
//! Lattice shells, Kloosterman-type exponential sums, the circle-method
//! decomposition of the shell multiplier, and the operators and experiments
//! built on top of them.

pub mod arith;
pub mod error;
pub mod expsum;
pub mod harness;
pub mod lattice;
pub mod multiplier;
pub mod operators;

pub use error::{Error, Result};
