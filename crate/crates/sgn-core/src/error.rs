//! Error types for grid construction, operator assembly, and solvers.

use thiserror::Error;

/// Errors from grid and derivative-operator construction.
#[derive(Debug, Error)]
pub enum SbpError {
    #[error("domain is empty: x_min = {x_min} must be below x_max = {x_max}")]
    EmptyDomain { x_min: f64, x_max: f64 },
    #[error("grid needs at least {min} nodes, got {n}")]
    GridTooSmall { n: usize, min: usize },
    #[error("unsupported {kind} order {order}; supported orders are {supported}")]
    UnsupportedOrder {
        kind: &'static str,
        order: usize,
        supported: &'static str,
    },
    #[error("stencil spanning {width} nodes does not fit on a grid of {n} nodes")]
    StencilTooWide { width: usize, n: usize },
}

/// Errors from the elliptic (dispersive) solver.
#[derive(Debug, Error)]
pub enum EllipticError {
    #[error("water depth must be positive everywhere: h[{index}] = {value}")]
    NonPositiveDepth { index: usize, value: f64 },
    #[error("matrix is not positive definite: pivot {pivot} in row {row}")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("conjugate gradient stalled at relative residual {residual:e} after {iters} iterations")]
    CgStalled { residual: f64, iters: usize },
    #[error("operator was assembled for {expected} nodes, got a field of length {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Errors from semidiscrete model evaluation.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error("water depth must be positive everywhere: h[{index}] = {value}")]
    NonPositiveDepth { index: usize, value: f64 },
    #[error("state vector of length {got} does not hold {fields} fields of {n} nodes")]
    BadStateLength { got: usize, fields: usize, n: usize },
    #[error("the flat-bathymetry model requires b = 0, got max |b| = {max_abs}")]
    NonFlatBathymetry { max_abs: f64 },
}

/// Errors from post-processing diagnostics.
#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("field lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("convergence inputs must be positive, finite, and of equal length >= 2")]
    BadConvergenceInput,
    #[error("gauge position {x} lies outside the domain")]
    GaugeOutsideDomain { x: f64 },
    #[error("no sample exceeds the threshold {threshold} in the analysis window")]
    NoWaveAboveThreshold { threshold: f64 },
    #[error("soliton fit did not converge; best amplitude {amplitude}, center {center}, rms misfit {residual:e}")]
    FitDidNotConverge { amplitude: f64, center: f64, residual: f64 },
    #[error("series is too short or degenerate for a least-squares fit")]
    DegenerateSeries,
}

/// Errors from time integration.
#[derive(Debug, Error)]
pub enum IntegrationError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid time span: t0 = {t0}, t_end = {t_end}")]
    InvalidSpan { t0: f64, t_end: f64 },
    #[error("invalid step control: {0}")]
    InvalidControl(String),
    #[error("step size underflow at t = {t}: dt = {dt:e}")]
    StepSizeUnderflow { t: f64, dt: f64 },
    #[error("exceeded the step budget of {max_steps} steps at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },
    #[error("state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },
}
