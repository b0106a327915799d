//! Error types for the numeric and combinatorial layers.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum CurveError {
    #[error("invalid family member: {0}")]
    InvalidFamily(String),
    #[error("root isolation too oscillatory near x = {near}")]
    TooOscillatory { near: f64 },
    #[error("tangency count keeps growing under refinement near ({x1}, {x2})")]
    AccumulationSuspected { x1: f64, x2: f64 },
    #[error("symbolic derivative of order {order} unsupported for this function")]
    UnsupportedOrder { order: u32 },
}

#[derive(Debug, Clone, Error)]
pub enum RegionError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("height {height} outside the analysis window")]
    HeightOutsideWindow { height: f64 },
}

#[derive(Debug, Clone, Error)]
pub enum SweepError {
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error("interval matching ambiguous at height {height} after {refines} refinements")]
    RefinementExceeded { height: f64, refines: u32 },
}

#[derive(Debug, Clone, Error)]
pub enum ZError {
    #[error("sample ({x1}, {x2}) lies in the region but matches no graph track")]
    LocateFailed { x1: f64, x2: f64 },
    #[error("graphs have different sizes: {0} vs {1} nodes")]
    SizeMismatch(usize, usize),
    #[error(transparent)]
    Region(#[from] RegionError),
}

#[derive(Debug, Clone, Error)]
pub enum LiftError {
    #[error("region empty within the sampling window")]
    EmptyRegion,
    #[error("point dimension {got} does not match map dimension {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error(transparent)]
    Region(#[from] RegionError),
}
