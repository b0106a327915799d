//! Numeric tolerances shared across the crate.
//!
//! Every threshold used by the algorithms is named here so that tests and
//! the CLI report the same numbers the library actually enforces.

/// Absolute x-tolerance for bisection refinement of roots and tangencies.
pub const BISECT_X_TOL: f64 = 1e-12;

/// Exponent below which `exp` is treated as exact zero (f64 underflow edge).
/// Evaluating the flat factor first and flushing avoids NaN from the
/// companion `(1/x)^k` overflow.
pub const UNDERFLOW_EXP: f64 = -745.0;

/// Step used by finite-difference verification oracles.
pub const FD_STEP: f64 = 1e-5;

/// Critical-event heights closer than this are merged into one event.
pub const EVENT_DEDUP_TOL: f64 = 1e-9;

/// Residual |g| allowed at a non-truncated slice endpoint.
pub const ENDPOINT_RESIDUAL: f64 = 1e-9;

/// Tolerance for pairwise curve-intersection (corner) location.
pub const CORNER_TOL: f64 = 1e-10;

/// Cap on the half-gap offset used when slicing just off an event height.
pub const EVENT_DELTA_CAP: f64 = 1e-3;

/// Relative singular-value threshold for numerical rank decisions.
pub const RANK_REL_THRESHOLD: f64 = 1e-6;

/// A Z-image run with height spread below this is a point, not an arc.
pub const ARC_POINT_THRESHOLD: f64 = 1e-7;

/// Node heights must match within this for height-respecting isomorphism.
pub const ISO_HEIGHT_TOL: f64 = 1e-9;

/// Minimum log-height separation for witness heights in accumulation
/// evidence. Distinctness is certified in log domain because the witness
/// heights of a flat oscillation underflow f64 after a handful of terms.
pub const WITNESS_LOG_SEP: f64 = 1e-14;
