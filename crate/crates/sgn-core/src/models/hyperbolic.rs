//! Hyperbolic approximation of the SGN equations with relaxation parameter
//! `lambda`, in the energy-conserving split form.
//!
//! The state carries `(h, u, w, eta)`; as `lambda` grows, `eta -> h` and
//! `w -> -h u_x`, recovering the classical system at rate `1/lambda`.

use super::{check_positive_depth, check_state_len, field, field_mut, Semidiscretization};
use crate::error::ModelError;
use crate::sbp::OperatorSet;
use crate::stabilization::{av_coefficient, av_term};
use ndarray::Array1;
use std::sync::Arc;

/// Additional time-dependent forcing, used by manufactured solutions.
pub trait SourceTerms: Send + Sync {
    /// Adds the forcing at time `t` to the four tendencies.
    fn add(
        &self,
        t: f64,
        x: &Array1<f64>,
        dh: &mut Array1<f64>,
        du: &mut Array1<f64>,
        dw: &mut Array1<f64>,
        deta: &mut Array1<f64>,
    );
}

/// Semidiscrete hyperbolic-approximation SGN model.
#[derive(Clone)]
pub struct HyperbolicModel {
    ops: OperatorSet,
    g: f64,
    lambda: f64,
    b: Array1<f64>,
    db: Array1<f64>,
    variable: bool,
    av_mu: Option<f64>,
    sources: Option<Arc<dyn SourceTerms>>,
}

impl std::fmt::Debug for HyperbolicModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HyperbolicModel")
            .field("g", &self.g)
            .field("lambda", &self.lambda)
            .field("variable", &self.variable)
            .field("av_mu", &self.av_mu)
            .field("sources", &self.sources.is_some())
            .finish()
    }
}

impl HyperbolicModel {
    /// Flat-bottom model (`b = 0`).
    pub fn flat(ops: OperatorSet, g: f64, lambda: f64) -> Self {
        let n = ops.grid().n();
        Self {
            ops,
            g,
            lambda,
            b: Array1::zeros(n),
            db: Array1::zeros(n),
            variable: false,
            av_mu: None,
            sources: None,
        }
    }

    /// Variable-bathymetry model.
    pub fn variable(ops: OperatorSet, g: f64, lambda: f64, b: Array1<f64>) -> Result<Self, ModelError> {
        if b.len() != ops.grid().n() {
            return Err(ModelError::BadStateLength {
                got: b.len(),
                fields: 1,
                n: ops.grid().n(),
            });
        }
        let db = ops.d().apply(&b);
        Ok(Self {
            ops,
            g,
            lambda,
            b,
            db,
            variable: true,
            av_mu: None,
            sources: None,
        })
    }

    /// Enables artificial viscosity with strength `c` (`mu = c dx^p / p`).
    pub fn with_artificial_viscosity(mut self, c: f64) -> Self {
        self.av_mu = Some(av_coefficient(self.ops.grid().dx(), self.ops.order(), c));
        self
    }

    /// Attaches manufactured-solution source terms.
    pub fn with_sources(mut self, sources: Arc<dyn SourceTerms>) -> Self {
        self.sources = Some(sources);
        self
    }

    /// Relaxation parameter.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Gravitational acceleration.
    pub fn gravity(&self) -> f64 {
        self.g
    }

    /// Consistent auxiliary fields `eta = h`, `w = -h D u`.
    pub fn init_auxiliary(&self, h: &Array1<f64>, u: &Array1<f64>) -> (Array1<f64>, Array1<f64>) {
        let w = -(h * &self.ops.d().apply(u));
        (w, h.clone())
    }

    /// Tendencies of `(h, u, w, eta)` at time `t`.
    #[allow(clippy::type_complexity)]
    pub fn rhs_fields(
        &self,
        t: f64,
        h: &Array1<f64>,
        u: &Array1<f64>,
        w: &Array1<f64>,
        eta: &Array1<f64>,
    ) -> Result<(Array1<f64>, Array1<f64>, Array1<f64>, Array1<f64>), ModelError> {
        check_positive_depth(h.view())?;
        let d = self.ops.d();
        let (g, lambda) = (self.g, self.lambda);
        let b = &self.b;
        let dh_x = d.apply(h);
        let du_x = d.apply(u);
        let dw_x = d.apply(w);
        let deta_x = d.apply(eta);
        let hu = h * u;
        let eta_over_h = eta / h;

        let dh = -(u * &dh_x + h * &du_x);

        // Momentum: hydrostatic and velocity split terms as in the shallow
        // water model, plus the lambda coupling terms.
        let mut mom = g * (d.apply(&(h * &(h + b))) - (h + b) * &dh_x)
            + 0.5 * (h * &d.apply(&(u * u)) - u * u * &dh_x + u * &d.apply(&hu) - &hu * &du_x);
        mom = mom
            + (lambda / 6.0) * (&eta_over_h * &eta_over_h * &dh_x)
            + (lambda / 3.0) * &deta_x
            - (lambda / 3.0) * (&eta_over_h * &deta_x)
            - (lambda / 6.0) * d.apply(&(eta * &eta_over_h));
        if self.variable {
            mom = mom + (lambda / 2.0) * &self.db - (lambda / 2.0) * (&eta_over_h * &self.db);
        }
        if let Some(mu) = self.av_mu {
            mom = mom - av_term(&self.ops, mu, h, u);
        }
        let du = -(mom / h);

        // Vertical velocity: split transport plus the pointwise source
        // lambda * 1 - lambda * eta / h.
        let transport = 0.5 * d.apply(&(&hu * w)) + 0.5 * (&hu * &dw_x)
            - 0.5 * (u * w * &dh_x)
            - 0.5 * (h * w * &du_x);
        let dw = (lambda - lambda * &eta_over_h - transport) / h;

        let mut deta = -(u * &deta_x) + w;
        if self.variable {
            deta = deta - 1.5 * (u * &self.db);
        }

        if let Some(src) = &self.sources {
            let mut dh = dh;
            let mut du = du;
            let mut dw = dw;
            let mut deta = deta;
            src.add(t, self.ops.grid().nodes(), &mut dh, &mut du, &mut dw, &mut deta);
            return Ok((dh, du, dw, deta));
        }
        Ok((dh, du, dw, deta))
    }

    /// Total energy including the `lambda` penalty part.
    pub fn energy_fields(
        &self,
        h: &Array1<f64>,
        u: &Array1<f64>,
        w: &Array1<f64>,
        eta: &Array1<f64>,
    ) -> f64 {
        let lambda = self.lambda;
        let hb = h + &self.b;
        let density = 0.5 * self.g * (&hb * &hb)
            + 0.5 * (h * u) * u
            + (1.0 / 6.0) * (h * w) * w
            + (lambda / 6.0) * h
            - (lambda / 3.0) * eta
            + (lambda / 6.0) * ((eta * eta) / h);
        self.ops.mass().quadrature(&density)
    }

    /// Energy gradient `(dE/dh, dE/du, dE/dw, dE/deta)` with quadrature weights.
    #[allow(clippy::type_complexity)]
    pub fn energy_gradient(
        &self,
        h: &Array1<f64>,
        u: &Array1<f64>,
        w: &Array1<f64>,
        eta: &Array1<f64>,
    ) -> (Array1<f64>, Array1<f64>, Array1<f64>, Array1<f64>) {
        let m = self.ops.mass().weight();
        let lambda = self.lambda;
        let eta_over_h = eta / h;
        let gh = (self.g * (h + &self.b)
            + 0.5 * (u * u)
            + (1.0 / 6.0) * (w * w)
            + lambda / 6.0
            - (lambda / 6.0) * (&eta_over_h * &eta_over_h))
            * m;
        let gu = (h * u) * m;
        let gw = ((h * w) / 3.0) * m;
        let geta = ((eta_over_h - 1.0) * (lambda / 3.0)) * m;
        (gh, gu, gw, geta)
    }
}

impl Semidiscretization for HyperbolicModel {
    fn n_nodes(&self) -> usize {
        self.ops.grid().n()
    }

    fn n_fields(&self) -> usize {
        4
    }

    fn field_names(&self) -> &'static [&'static str] {
        &["h", "u", "w", "eta"]
    }

    fn ops(&self) -> &OperatorSet {
        &self.ops
    }

    fn bathymetry(&self) -> &Array1<f64> {
        &self.b
    }

    fn rhs(&self, t: f64, y: &Array1<f64>, dy: &mut Array1<f64>) -> Result<(), ModelError> {
        let n = self.n_nodes();
        check_state_len(y, 4, n)?;
        let h = field(y, 0, n).to_owned();
        let u = field(y, 1, n).to_owned();
        let w = field(y, 2, n).to_owned();
        let eta = field(y, 3, n).to_owned();
        let (dh, du, dw, deta) = self.rhs_fields(t, &h, &u, &w, &eta)?;
        field_mut(dy, 0, n).assign(&dh);
        field_mut(dy, 1, n).assign(&du);
        field_mut(dy, 2, n).assign(&dw);
        field_mut(dy, 3, n).assign(&deta);
        Ok(())
    }

    fn energy(&self, y: &Array1<f64>) -> f64 {
        let n = self.n_nodes();
        self.energy_fields(
            &field(y, 0, n).to_owned(),
            &field(y, 1, n).to_owned(),
            &field(y, 2, n).to_owned(),
            &field(y, 3, n).to_owned(),
        )
    }
}
