//! Classical SGN equations with an elliptic solve for the velocity tendency.
//!
//! Every variant keeps the split-form momentum terms of the shallow water
//! model and adds dispersive pressure terms; the velocity tendency solves
//! `A du/dt = y` with the symmetric positive definite operator from
//! [`crate::elliptic`]. Central operators conserve mass, momentum (flat), and
//! energy; upwind pairs trade the central pressure part for a dissipative
//! product while keeping the same invariants.

use super::{
    check_positive_depth, check_state_len, field, field_mut, BathymetryVariant,
    Semidiscretization,
};
use crate::elliptic::{assemble, EllipticOperator, SolverBackend};
use crate::error::ModelError;
use crate::sbp::{OperatorMode, OperatorSet};
use crate::stabilization::{av_coefficient, av_term};
use ndarray::Array1;
use std::cell::RefCell;

/// Semidiscrete classical SGN model.
#[derive(Debug)]
pub struct OriginalModel {
    ops: OperatorSet,
    g: f64,
    b: Array1<f64>,
    db: Array1<f64>,
    variant: BathymetryVariant,
    av_mu: Option<f64>,
    backend: SolverBackend,
    frozen: bool,
    cache: RefCell<Option<EllipticOperator>>,
}

impl OriginalModel {
    /// Builds the model; the flat variant requires `b = 0`.
    pub fn new(
        ops: OperatorSet,
        g: f64,
        b: Array1<f64>,
        variant: BathymetryVariant,
    ) -> Result<Self, ModelError> {
        if b.len() != ops.grid().n() {
            return Err(ModelError::BadStateLength {
                got: b.len(),
                fields: 1,
                n: ops.grid().n(),
            });
        }
        if variant == BathymetryVariant::Flat {
            let max_abs = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if max_abs > 0.0 {
                return Err(ModelError::NonFlatBathymetry { max_abs });
            }
        }
        let db = ops.d().apply(&b);
        Ok(Self {
            ops,
            g,
            b,
            db,
            variant,
            av_mu: None,
            backend: SolverBackend::Direct,
            frozen: false,
            cache: RefCell::new(None),
        })
    }

    /// Enables artificial viscosity with strength `c` (`mu = c dx^p / p`).
    pub fn with_artificial_viscosity(mut self, c: f64) -> Self {
        self.av_mu = Some(av_coefficient(self.ops.grid().dx(), self.ops.order(), c));
        self
    }

    /// Selects the linear-solver backend.
    pub fn with_backend(mut self, backend: SolverBackend) -> Self {
        self.backend = backend;
        self
    }

    /// Reuses the elliptic factorization across the stages of one time step.
    /// This is an approximation: it voids the semidiscrete energy balance.
    pub fn with_frozen_factorization(mut self, frozen: bool) -> Self {
        self.frozen = frozen;
        self
    }

    /// Bathymetry variant.
    pub fn variant(&self) -> BathymetryVariant {
        self.variant
    }

    /// Gravitational acceleration.
    pub fn gravity(&self) -> f64 {
        self.g
    }

    fn elliptic(&self, h: &Array1<f64>) -> Result<EllipticOperator, ModelError> {
        let b = match self.variant {
            BathymetryVariant::Flat => None,
            _ => Some(&self.b),
        };
        Ok(assemble(&self.ops, h, b, self.variant.slope_sq(), self.backend)?)
    }

    /// Dispersive pressure for central operators (all variants).
    pub fn pressure_central(&self, h: &Array1<f64>, u: &Array1<f64>) -> Array1<f64> {
        let d = self.ops.d();
        let dh = d.apply(h);
        let du = d.apply(u);
        let h2 = h * h;
        let mut p = 0.5 * (&h2 * h) * (&du * &du) + 0.5 * (&h2 * &dh) * (u * &du)
            - (1.0 / 6.0) * h * &d.apply(&(&h2 * u * &du))
            - (1.0 / 6.0) * (&h2 * u) * &d.apply(&(h * &du));
        if self.variant != BathymetryVariant::Flat {
            let db = &self.db;
            let u2 = u * u;
            p = p + 0.25 * h * &d.apply(&(h * db * &u2)) + 0.25 * (&h2 * u) * &d.apply(&(db * u))
                - 0.25 * (h * &dh) * (db * &u2)
                - 0.25 * (&h2 * db) * (u * &du);
        }
        p
    }

    /// Dispersive pressure split `(p_plus, p_zero)` for upwind pairs, where
    /// `p_plus` is fluxed with `D+` and `p_zero` with the central average.
    pub fn pressure_upwind(
        &self,
        h: &Array1<f64>,
        u: &Array1<f64>,
    ) -> (Array1<f64>, Array1<f64>) {
        let pair = self.ops.pair().expect("upwind pressure needs an upwind pair");
        let d = self.ops.d();
        let dh = d.apply(h);
        let du = d.apply(u);
        let dmu = pair.minus.apply(u);
        let h2 = h * h;
        let mut p_plus =
            0.5 * (&h2 * h) * (&du * &dmu) + 0.5 * (&h2 * &dh) * (u * &dmu);
        let mut p_zero = -(1.0 / 6.0) * h * &d.apply(&(&h2 * u * &du))
            - (1.0 / 6.0) * (&h2 * u) * &d.apply(&(h * &du));
        if self.variant != BathymetryVariant::Flat {
            let db = &self.db;
            let u2 = u * u;
            p_plus = p_plus - 0.25 * (&h2 * db) * (u * &du) - 0.25 * (h * &dh) * (db * &u2);
            p_zero = p_zero
                + 0.25 * h * &d.apply(&(h * db * &u2))
                + 0.25 * (&h2 * u) * &d.apply(&(db * u));
        }
        (p_plus, p_zero)
    }

    /// Spatial momentum terms `G` so that `A du/dt = -G + F_mu`.
    pub fn momentum_spatial(&self, h: &Array1<f64>, u: &Array1<f64>) -> Array1<f64> {
        let d = self.ops.d();
        let b = &self.b;
        let dh = d.apply(h);
        let du = d.apply(u);
        let hu = h * u;
        let mut g_term = self.g * (d.apply(&(h * &(h + b))) - (h + b) * &dh)
            + 0.5 * (h * &d.apply(&(u * u)) - u * u * &dh + u * &d.apply(&hu) - &hu * &du);
        let p_total = match self.ops.mode() {
            OperatorMode::Central => {
                let p = self.pressure_central(h, u);
                g_term = g_term + d.apply(&p);
                p
            }
            OperatorMode::Upwind => {
                let (p_plus, p_zero) = self.pressure_upwind(h, u);
                let d_plus = &self.ops.pair().expect("upwind mode").plus;
                g_term = g_term + d_plus.apply(&p_plus) + d.apply(&p_zero);
                p_plus + p_zero
            }
        };
        if self.variant != BathymetryVariant::Flat {
            g_term = g_term + 1.5 * ((&p_total / h) * &self.db);
        }
        if self.variant == BathymetryVariant::FullSystem {
            let db = &self.db;
            let u2 = u * u;
            let psi = 0.125 * d.apply(&(h * db * &u2)) + 0.125 * &hu * &d.apply(&(db * u))
                - 0.125 * (&dh * db) * &u2
                - 0.125 * (h * db) * (u * &du);
            g_term = g_term + psi * db;
        }
        g_term
    }

    /// Tendencies of `(h, u)`.
    pub fn rhs_fields(
        &self,
        h: &Array1<f64>,
        u: &Array1<f64>,
    ) -> Result<(Array1<f64>, Array1<f64>), ModelError> {
        check_positive_depth(h.view())?;
        let d = self.ops.d();
        let dh = -(u * &d.apply(h) + h * &d.apply(u));
        let mut y = -self.momentum_spatial(h, u);
        if let Some(mu) = self.av_mu {
            y = y + av_term(&self.ops, mu, h, u);
        }
        let du = if self.frozen {
            let mut cache = self.cache.borrow_mut();
            if cache.is_none() {
                *cache = Some(self.elliptic(h)?);
            }
            cache.as_ref().expect("cache filled above").solve(&y)?
        } else {
            self.elliptic(h)?.solve(&y)?
        };
        Ok((dh, du))
    }

    /// Total energy with the variant-dependent dispersive part.
    pub fn energy_fields(&self, h: &Array1<f64>, u: &Array1<f64>) -> f64 {
        let du = self.ops.d_lower().apply(u);
        let hb = h + &self.b;
        let mut density =
            0.5 * self.g * (&hb * &hb) + 0.5 * (h * u) * u + (1.0 / 6.0) * (h * h * h) * (&du * &du);
        if self.variant != BathymetryVariant::Flat {
            let db = &self.db;
            density = density - 0.5 * (h * h * db) * (&du * u)
                + self.variant.energy_slope_sq() * ((h * db) * db) * (u * u);
        }
        self.ops.mass().quadrature(&density)
    }

    /// Energy gradient `(dE/dh, dE/du)` with quadrature weights; the `du`
    /// component includes the transposed-derivative chain terms.
    pub fn energy_gradient(
        &self,
        h: &Array1<f64>,
        u: &Array1<f64>,
    ) -> (Array1<f64>, Array1<f64>) {
        let m = self.ops.mass().weight();
        let d_tilde = self.ops.d_lower();
        let du = d_tilde.apply(u);
        let db = &self.db;
        let c2 = self.variant.energy_slope_sq();
        let bathy = self.variant != BathymetryVariant::Flat;
        let mut gh = self.g * (h + &self.b) + 0.5 * (u * u) + 0.5 * (h * h) * (&du * &du);
        if bathy {
            gh = gh - (h * db) * (&du * u) + c2 * (db * db) * (u * u);
        }
        let mut gu_point = h * u;
        let mut chain = (1.0 / 3.0) * (h * h * h) * &du;
        if bathy {
            gu_point = gu_point - 0.5 * (h * h * db) * &du + 2.0 * c2 * ((h * db) * db) * u;
            chain = chain - 0.5 * (h * h * db) * u;
        }
        let gu = (gu_point + d_tilde.apply_transpose(&chain)) * m;
        (gh * m, gu)
    }
}

impl Semidiscretization for OriginalModel {
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
        self.energy_fields(&field(y, 0, n).to_owned(), &field(y, 1, n).to_owned())
    }

    fn on_step_begin(&self) {
        if self.frozen {
            self.cache.borrow_mut().take();
        }
    }
}
