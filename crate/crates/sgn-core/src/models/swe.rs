//! Shallow water equations in the energy-conserving split form.

use super::{check_positive_depth, check_state_len, field, field_mut, Semidiscretization};
use crate::error::ModelError;
use crate::sbp::OperatorSet;
use crate::stabilization::{av_coefficient, av_term};
use ndarray::Array1;

/// Semidiscrete shallow water model over variable bathymetry.
#[derive(Debug, Clone)]
pub struct SweModel {
    ops: OperatorSet,
    g: f64,
    b: Array1<f64>,
    av_mu: Option<f64>,
}

impl SweModel {
    /// Builds the model; `b` must match the grid.
    pub fn new(ops: OperatorSet, g: f64, b: Array1<f64>) -> Result<Self, ModelError> {
        if b.len() != ops.grid().n() {
            return Err(ModelError::BadStateLength {
                got: b.len(),
                fields: 1,
                n: ops.grid().n(),
            });
        }
        Ok(Self {
            ops,
            g,
            b,
            av_mu: None,
        })
    }

    /// Enables artificial viscosity with strength `c` (`mu = c dx^p / p`).
    pub fn with_artificial_viscosity(mut self, c: f64) -> Self {
        self.av_mu = Some(av_coefficient(self.ops.grid().dx(), self.ops.order(), c));
        self
    }

    /// Gravitational acceleration.
    pub fn gravity(&self) -> f64 {
        self.g
    }

    /// Tendencies of `(h, u)`.
    pub fn rhs_fields(
        &self,
        h: &Array1<f64>,
        u: &Array1<f64>,
    ) -> Result<(Array1<f64>, Array1<f64>), ModelError> {
        check_positive_depth(h.view())?;
        let d = self.ops.d();
        let b = &self.b;
        let dh_x = d.apply(h);
        let du_x = d.apply(u);
        let hu = h * u;
        let dh = -(u * &dh_x + h * &du_x);
        // Split momentum form: g D(h(h+b)) - g(h+b) Dh
        //   + 1/2 (h D(u^2) - u^2 Dh + u D(hu) - h u Du).
        let mut mom = self.g * (d.apply(&(h * &(h + b))) - (h + b) * &dh_x)
            + 0.5 * (h * &d.apply(&(u * u)) - u * u * &dh_x + u * &d.apply(&hu) - &hu * &du_x);
        if let Some(mu) = self.av_mu {
            mom = mom - av_term(&self.ops, mu, h, u);
        }
        let du = -(mom / h);
        Ok((dh, du))
    }

    /// Total energy `1^T M (1/2 g h^2 + g h b + 1/2 h u^2)`.
    pub fn energy_fields(&self, h: &Array1<f64>, u: &Array1<f64>) -> f64 {
        let density = 0.5 * self.g * h * h + self.g * (h * &self.b) + 0.5 * (h * u) * u;
        self.ops.mass().quadrature(&density)
    }

    /// Energy gradient `(dE/dh, dE/du)` including quadrature weights.
    pub fn energy_gradient(
        &self,
        h: &Array1<f64>,
        u: &Array1<f64>,
    ) -> (Array1<f64>, Array1<f64>) {
        let w = self.ops.mass().weight();
        let gh = (self.g * (h + &self.b) + 0.5 * (u * u)) * w;
        let gu = (h * u) * w;
        (gh, gu)
    }
}

impl Semidiscretization for SweModel {
    fn n_nodes(&self) -> usize {
        self.ops.grid().n()
    }

    fn n_fields(&self) -> usize {
        2
    }

    fn field_names(&self) -> &'static [&'static str] {
        &["h", "u"]
    }

    fn ops(&self) -> &OperatorSet {
        &self.ops
    }

    fn bathymetry(&self) -> &Array1<f64> {
        &self.b
    }

    fn rhs(&self, _t: f64, y: &Array1<f64>, dy: &mut Array1<f64>) -> Result<(), ModelError> {
        let n = self.n_nodes();
        check_state_len(y, 2, n)?;
        let h = field(y, 0, n).to_owned();
        let u = field(y, 1, n).to_owned();
        let (dh, du) = self.rhs_fields(&h, &u)?;
        field_mut(dy, 0, n).assign(&dh);
        field_mut(dy, 1, n).assign(&du);
        Ok(())
    }

    fn energy(&self, y: &Array1<f64>) -> f64 {
        let n = self.n_nodes();
        let h = field(y, 0, n).to_owned();
        let u = field(y, 1, n).to_owned();
        self.energy_fields(&h, &u)
    }
}
