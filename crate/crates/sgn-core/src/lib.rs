//! Structure-preserving finite-difference solvers for the Serre-Green-Naghdi
//! (SGN) equations in one space dimension.
//!
//! The crate provides periodic summation-by-parts operators, an elliptic
//! solver for the dispersive step of the classical SGN system, semidiscrete
//! right-hand sides for shallow water, hyperbolic-approximation SGN, and
//! classical SGN models (flat and variable bathymetry), artificial-viscosity
//! stabilization, embedded Runge-Kutta integration with invariant-preserving
//! relaxation, scenario setups, and diagnostics.

pub mod diagnostics;
pub mod elliptic;
pub mod error;
pub mod grid;
pub mod models;
pub mod sbp;
pub mod scenarios;
pub mod stabilization;
pub mod time;

pub use error::{EllipticError, IntegrationError, ModelError, SbpError};
pub use grid::PeriodicGrid;
pub use sbp::{MassMatrix, OperatorMode, OperatorSet};

/// Standard gravitational acceleration used throughout, in m/s^2.
pub const GRAVITY: f64 = 9.81;
