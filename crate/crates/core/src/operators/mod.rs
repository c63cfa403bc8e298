//! Spatial-side operators: averages, the lacunary maximal function,
//! multiplier pieces on finite grids, the `M_1/M_2` split and the weak-type
//! bookkeeping.

pub mod average;
pub mod exponents;
pub mod fourier;
pub mod grid;
pub mod split;

pub use average::{lacunary_maximal, spherical_average, stopping_time_linearize, StoppingTime};
pub use exponents::{critical_p, interp_exponent, weak_type_budget, weak_type_ratio, weak_type_scan, weak_type_scan_points};
pub use fourier::{apply_multiplier, FourierContext, FourierOptions, MultiplierOutput};
pub use grid::GridFunction;
pub use split::{dyadic_error_sup, m1_m2_split, SplitParams, SplitPieces, SplitWorkspace};
