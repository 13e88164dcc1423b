//! Semidiscrete models: shallow water, hyperbolic-approximation SGN, and the
//! classical SGN system, all in split forms that conserve the discrete energy.

pub mod hyperbolic;
pub mod original;
pub mod swe;

use crate::error::ModelError;
use crate::sbp::OperatorSet;
use ndarray::{s, Array1, ArrayView1, ArrayViewMut1};

/// Bathymetry treatment of the classical SGN system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BathymetryVariant {
    /// Flat bottom, `b = 0`.
    Flat,
    /// Variable bottom with the mild-slope dispersive terms.
    MildSlope,
    /// Variable bottom with the full dispersive terms.
    FullSystem,
}

impl BathymetryVariant {
    /// Coefficient of the `h (Db)^2` term in the elliptic operator and of the
    /// `(Db)^2 u^2` energy contribution.
    pub(crate) fn slope_sq(self) -> f64 {
        match self {
            BathymetryVariant::Flat => 0.0,
            BathymetryVariant::MildSlope => 0.75,
            BathymetryVariant::FullSystem => 1.0,
        }
    }

    /// Energy coefficient of `h (Db)^2 u^2` (half the elliptic one).
    pub(crate) fn energy_slope_sq(self) -> f64 {
        match self {
            BathymetryVariant::Flat => 0.0,
            BathymetryVariant::MildSlope => 0.375,
            BathymetryVariant::FullSystem => 0.5,
        }
    }
}

/// Common interface of the semidiscrete systems for integration and output.
///
/// States are flat vectors holding the prognostic fields back to back:
/// `[h | u]` for two-field models and `[h | u | w | eta]` for the hyperbolic
/// approximation.
pub trait Semidiscretization {
    /// Number of grid nodes.
    fn n_nodes(&self) -> usize;
    /// Number of prognostic fields.
    fn n_fields(&self) -> usize;
    /// Field names in state order.
    fn field_names(&self) -> &'static [&'static str];
    /// Operator bundle the model was built on.
    fn ops(&self) -> &OperatorSet;
    /// Bathymetry profile.
    fn bathymetry(&self) -> &Array1<f64>;
    /// Writes the tendency of `y` at time `t` into `dy`.
    fn rhs(&self, t: f64, y: &Array1<f64>, dy: &mut Array1<f64>) -> Result<(), ModelError>;
    /// Total discrete energy of the state.
    fn energy(&self, y: &Array1<f64>) -> f64;
    /// Hook invoked once at the start of every time step.
    fn on_step_begin(&self) {}

    /// State vector length.
    fn dim(&self) -> usize {
        self.n_nodes() * self.n_fields()
    }

    /// Total water mass `1^T M h`, summed compensated so drifts can be
    /// tracked down to a few ulps.
    fn mass(&self, y: &Array1<f64>) -> f64 {
        let h = field(y, 0, self.n_nodes()).to_owned();
        self.ops().mass().quadrature(&h)
    }

    /// Total momentum `1^T M (h u)`, summed compensated.
    fn momentum(&self, y: &Array1<f64>) -> f64 {
        let n = self.n_nodes();
        let hu = &field(y, 0, n) * &field(y, 1, n);
        self.ops().mass().quadrature(&hu)
    }
}

/// Borrows field `idx` from a flat state vector.
pub fn field(y: &Array1<f64>, idx: usize, n: usize) -> ArrayView1<'_, f64> {
    y.slice(s![idx * n..(idx + 1) * n])
}

/// Mutably borrows field `idx` from a flat state vector.
pub fn field_mut(y: &mut Array1<f64>, idx: usize, n: usize) -> ArrayViewMut1<'_, f64> {
    y.slice_mut(s![idx * n..(idx + 1) * n])
}

/// Packs per-field arrays into a flat state vector.
pub fn pack(fields: &[&Array1<f64>]) -> Array1<f64> {
    let n = fields.first().map_or(0, |f| f.len());
    let mut y = Array1::zeros(n * fields.len());
    for (i, f) in fields.iter().enumerate() {
        y.slice_mut(s![i * n..(i + 1) * n]).assign(f);
    }
    y
}

pub(crate) fn check_state_len(
    y: &Array1<f64>,
    fields: usize,
    n: usize,
) -> Result<(), ModelError> {
    if y.len() != fields * n {
        return Err(ModelError::BadStateLength {
            got: y.len(),
            fields,
            n,
        });
    }
    Ok(())
}

pub(crate) fn check_positive_depth(h: ArrayView1<'_, f64>) -> Result<(), ModelError> {
    if let Some((index, &value)) = h.iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
        return Err(ModelError::NonPositiveDepth { index, value });
    }
    Ok(())
}
