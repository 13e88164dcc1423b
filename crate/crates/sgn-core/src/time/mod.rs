//! Explicit Runge-Kutta time integration with invariant-preserving relaxation.
//!
//! The integrator advances any [`Integrable`] system with an embedded pair
//! from [`tableau`], either at fixed step size or with a PI-controlled
//! adaptive step. Optional relaxation rescales each update `y + gamma dy` so
//! the system's nonlinear invariant (the discrete total energy for the models
//! in this crate) is preserved to roundoff; the time variable then advances
//! by `gamma dt`, which keeps the method's order of accuracy.

mod tableau;

pub use tableau::ButcherTableau;

use crate::error::{IntegrationError, ModelError};
use crate::models::Semidiscretization;
use ndarray::Array1;

/// Right-hand side plus the scalar invariant used by relaxation.
///
/// Implemented for every [`Semidiscretization`] (the invariant is the model
/// energy), and directly by lightweight test systems.
pub trait Integrable {
    /// Writes the tendency of `y` at time `t` into `dy`.
    fn rhs(&self, t: f64, y: &Array1<f64>, dy: &mut Array1<f64>) -> Result<(), ModelError>;

    /// Scalar invariant preserved by the relaxation update.
    fn relaxation_invariant(&self, y: &Array1<f64>) -> f64;

    /// Hook invoked once before the stages of each attempted step.
    fn on_step_begin(&self) {}
}

impl<S: Semidiscretization + ?Sized> Integrable for S {
    fn rhs(&self, t: f64, y: &Array1<f64>, dy: &mut Array1<f64>) -> Result<(), ModelError> {
        Semidiscretization::rhs(self, t, y, dy)
    }

    fn relaxation_invariant(&self, y: &Array1<f64>) -> f64 {
        self.energy(y)
    }

    fn on_step_begin(&self) {
        Semidiscretization::on_step_begin(self);
    }
}

/// Adaptive step-size parameters for the embedded-pair PI controller.
#[derive(Debug, Clone)]
pub struct StepControl {
    /// Absolute tolerance entering the error weights.
    pub abs_tol: f64,
    /// Relative tolerance entering the error weights.
    pub rel_tol: f64,
    /// Safety factor multiplying the optimal step.
    pub safety: f64,
    /// Smallest allowed step shrink factor per step.
    pub factor_min: f64,
    /// Largest allowed step growth factor per step.
    pub factor_max: f64,
    /// Cap on attempted steps before aborting.
    pub max_steps: usize,
    /// First step size; `None` picks one from the initial tendency.
    pub initial_dt: Option<f64>,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            abs_tol: 1e-5,
            rel_tol: 1e-5,
            safety: 0.9,
            factor_min: 0.2,
            factor_max: 5.0,
            max_steps: 10_000_000,
            initial_dt: None,
        }
    }
}

impl StepControl {
    /// Equal absolute and relative tolerances.
    pub fn with_tolerance(tol: f64) -> Self {
        Self { abs_tol: tol, rel_tol: tol, ..Self::default() }
    }

    fn validate(&self) -> Result<(), IntegrationError> {
        let bad = |msg: &str| Err(IntegrationError::InvalidControl(msg.into()));
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.safety > 0.0 && self.safety < 1.0) {
            return bad("safety factor must lie in (0, 1)");
        }
        if !(self.factor_min > 0.0 && self.factor_min < 1.0 && self.factor_max > 1.0) {
            return bad("step factors must straddle one");
        }
        if let Some(dt) = self.initial_dt {
            if !(dt > 0.0) {
                return bad("initial step must be positive");
            }
        }
        Ok(())
    }
}

/// Step-size policy.
#[derive(Debug, Clone)]
pub enum Stepping {
    /// Constant step (the last step is clipped to the end of the span).
    Fixed { dt: f64 },
    /// Embedded-pair error control.
    Adaptive(StepControl),
}

/// Integration options: stepping policy and relaxation switch.
#[derive(Debug, Clone)]
pub struct IntegrateOptions {
    /// Step-size policy.
    pub stepping: Stepping,
    /// Enforce the nonlinear invariant through relaxation.
    pub relaxation: bool,
    /// Cap on attempted steps in fixed mode (adaptive mode uses its control).
    pub max_steps: usize,
}

impl IntegrateOptions {
    /// Fixed-step options without relaxation.
    pub fn fixed(dt: f64) -> Self {
        Self { stepping: Stepping::Fixed { dt }, relaxation: false, max_steps: 50_000_000 }
    }

    /// Adaptive options without relaxation.
    pub fn adaptive(control: StepControl) -> Self {
        Self { stepping: Stepping::Adaptive(control), relaxation: false, max_steps: 50_000_000 }
    }

    /// Toggles relaxation.
    pub fn with_relaxation(mut self, on: bool) -> Self {
        self.relaxation = on;
        self
    }
}

/// Per-step data handed to the observer after each accepted step.
#[derive(Debug, Clone, Copy)]
pub struct StepRecord {
    /// Time after the (possibly relaxed) update.
    pub t: f64,
    /// Step size attempted for this step.
    pub dt: f64,
    /// Relaxation parameter applied (one when relaxation is off).
    pub gamma: f64,
    /// Weighted error norm of the embedded estimate (zero in fixed mode).
    pub err_norm: f64,
}

/// Final state and step statistics.
#[derive(Debug, Clone)]
pub struct Solution {
    /// Time actually reached. Without relaxation this is the span end to
    /// roundoff; with relaxation the last update advances by `gamma dt`, so
    /// the run lands within `(gamma - 1) dt` of the span end and comparisons
    /// against exact solutions should use this value.
    pub t: f64,
    /// State at `t`.
    pub y: Array1<f64>,
    /// Accepted steps.
    pub accepted: usize,
    /// Rejected attempts.
    pub rejected: usize,
    /// Steps where no relaxation root was bracketed and `gamma = 1` was used.
    pub relaxation_fallbacks: usize,
}

/// Outcome of the scalar relaxation solve.
#[derive(Debug, Clone, Copy)]
pub struct RelaxationResult {
    /// Relaxation parameter.
    pub gamma: f64,
    /// Invariant residual at `gamma`.
    pub residual: f64,
    /// True when no root was bracketed and `gamma = 1` was returned.
    pub fallback: bool,
}

const BRACKETS: [(f64, f64); 2] = [(0.5, 1.5), (0.25, 1.75)];

/// Solves `invariant(y + gamma dy) = invariant(y)` for the relaxation
/// parameter, searching the unit-centred bracket and one widened bracket
/// before falling back to `gamma = 1`.
pub fn relaxation_gamma<S: Integrable + ?Sized>(
    system: &S,
    y: &Array1<f64>,
    dy: &Array1<f64>,
) -> RelaxationResult {
    let e0 = system.relaxation_invariant(y);
    // Resolve the root down to the evaluation noise of the invariant itself,
    // so that per-step residuals cannot accumulate above roundoff.
    let tol = 4.0 * f64::EPSILON * e0.abs().max(1.0);
    let r = |gamma: f64| system.relaxation_invariant(&(y + gamma * dy)) - e0;

    let r1 = r(1.0);
    if r1.abs() <= tol {
        return RelaxationResult { gamma: 1.0, residual: r1, fallback: false };
    }
    for (a, b) in BRACKETS {
        let (ra, rb) = (r(a), r(b));
        if ra.abs() <= tol {
            return RelaxationResult { gamma: a, residual: ra, fallback: false };
        }
        if rb.abs() <= tol {
            return RelaxationResult { gamma: b, residual: rb, fallback: false };
        }
        if ra * rb < 0.0 {
            let (gamma, residual) = brent(&r, a, b, ra, rb, tol);
            return RelaxationResult { gamma, residual, fallback: false };
        }
    }
    RelaxationResult { gamma: 1.0, residual: r1, fallback: true }
}

/// Brent's method on a sign-changing bracket; returns the root and residual.
fn brent(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, tol: f64) -> (f64, f64) {
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..200 {
        if fb.abs() <= tol || (b - a).abs() <= 4.0 * f64::EPSILON * b.abs().max(1.0) {
            break;
        }
        let s = if fa != fc && fb != fc {
            // Inverse quadratic interpolation.
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let mid = (3.0 * a + b) / 4.0;
        let out_of_range = !((s > mid.min(b)) && (s < mid.max(b)));
        let slow = if bisected {
            (s - b).abs() >= (b - c).abs() / 2.0 || (b - c).abs() < f64::EPSILON
        } else {
            (s - b).abs() >= (c - d).abs() / 2.0 || (c - d).abs() < f64::EPSILON
        };
        let (s, did_bisect) = if out_of_range || slow { ((a + b) / 2.0, true) } else { (s, false) };
        bisected = did_bisect;
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    (b, fb)
}

/// One embedded-pair step: fills `update` with the propagating increment and
/// `err` with the difference against the embedded solution.
fn erk_step<S: Integrable + ?Sized>(
    system: &S,
    t: f64,
    y: &Array1<f64>,
    dt: f64,
    tab: &ButcherTableau,
    stages: &mut [Array1<f64>],
    work: &mut Array1<f64>,
    update: &mut Array1<f64>,
    err: &mut Array1<f64>,
) -> Result<(), IntegrationError> {
    system.on_step_begin();
    for i in 0..tab.stages() {
        work.assign(y);
        for (j, &aij) in tab.a_row(i).iter().enumerate() {
            if aij != 0.0 {
                work.scaled_add(dt * aij, &stages[j]);
            }
        }
        let (head, tail) = stages.split_at_mut(i);
        let _ = head;
        system.rhs(t + tab.c()[i] * dt, work, &mut tail[0])?;
    }
    update.fill(0.0);
    err.fill(0.0);
    for (i, stage) in stages.iter().enumerate() {
        let bi = tab.b()[i];
        if bi != 0.0 {
            update.scaled_add(dt * bi, stage);
        }
        let di = bi - tab.b_hat()[i];
        if di != 0.0 {
            err.scaled_add(dt * di, stage);
        }
    }
    Ok(())
}

/// Weighted RMS norm of the error estimate against mixed tolerances.
fn wrms(err: &Array1<f64>, y0: &Array1<f64>, y1: &Array1<f64>, ctl: &StepControl) -> f64 {
    let n = err.len().max(1);
    let sum: f64 = err
        .iter()
        .zip(y0.iter().zip(y1))
        .map(|(&e, (&a, &b))| {
            let w = ctl.abs_tol + ctl.rel_tol * a.abs().max(b.abs());
            (e / w) * (e / w)
        })
        .sum();
    (sum / n as f64).sqrt()
}

/// Initial step size from the magnitude of the initial tendency.
fn initial_step<S: Integrable + ?Sized>(
    system: &S,
    t0: f64,
    y0: &Array1<f64>,
    span: f64,
    ctl: &StepControl,
) -> Result<f64, IntegrationError> {
    let mut f0 = Array1::zeros(y0.len());
    system.on_step_begin();
    system.rhs(t0, y0, &mut f0)?;
    let weight = |y: f64| ctl.abs_tol + ctl.rel_tol * y.abs();
    let n = y0.len().max(1) as f64;
    let d0 = (y0.iter().map(|&v| (v / weight(v)).powi(2)).sum::<f64>() / n).sqrt();
    let d1 = (y0.iter().zip(&f0).map(|(&v, &f)| (f / weight(v)).powi(2)).sum::<f64>() / n).sqrt();
    let h0 = if d0 >= 1e-5 && d1 >= 1e-5 { 0.01 * d0 / d1 } else { 1e-6 * span };
    Ok(h0.min(span / 10.0).max(span * 1e-12))
}

/// Integrates `system` from `(t0, y0)` to `t_end`, invoking `observer` with
/// the initial state and after every accepted step.
pub fn integrate<S, F>(
    system: &S,
    y0: &Array1<f64>,
    t0: f64,
    t_end: f64,
    tab: &ButcherTableau,
    options: &IntegrateOptions,
    mut observer: F,
) -> Result<Solution, IntegrationError>
where
    S: Integrable + ?Sized,
    F: FnMut(&StepRecord, &Array1<f64>),
{
    if !(t_end > t0) || !t0.is_finite() || !t_end.is_finite() {
        return Err(IntegrationError::InvalidSpan { t0, t_end });
    }
    let span = t_end - t0;
    let span_tol = 1e-12 * span.max(1.0);
    let (mut dt, ctl, max_steps) = match &options.stepping {
        Stepping::Fixed { dt } => {
            if !(*dt > 0.0) || !dt.is_finite() {
                return Err(IntegrationError::InvalidControl("fixed step must be positive".into()));
            }
            (*dt, None, options.max_steps)
        }
        Stepping::Adaptive(ctl) => {
            ctl.validate()?;
            let dt = match ctl.initial_dt {
                Some(dt) => dt,
                None => initial_step(system, t0, y0, span, ctl)?,
            };
            (dt, Some(ctl), ctl.max_steps)
        }
    };

    let mut y = y0.clone();
    let mut t = t0;
    let n = y.len();
    let mut stages: Vec<Array1<f64>> = (0..tab.stages()).map(|_| Array1::zeros(n)).collect();
    let mut work = Array1::zeros(n);
    let mut update = Array1::zeros(n);
    let mut err_vec = Array1::zeros(n);

    observer(&StepRecord { t, dt: 0.0, gamma: 1.0, err_norm: 0.0 }, &y);

    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut fallbacks = 0usize;
    let mut attempts = 0usize;
    let mut err_prev: f64 = 1.0;
    let mut just_rejected = false;

    while t < t_end - span_tol {
        if attempts >= max_steps {
            return Err(IntegrationError::TooManySteps { t, max_steps });
        }
        attempts += 1;
        let dt_step = dt.min(t_end - t);
        if dt_step < 1e-14 * t.abs().max(1.0) {
            return Err(IntegrationError::StepSizeUnderflow { t, dt: dt_step });
        }
        erk_step(system, t, &y, dt_step, tab, &mut stages, &mut work, &mut update, &mut err_vec)?;

        let err_norm = match ctl {
            Some(ctl) => {
                let y1 = &y + &update;
                wrms(&err_vec, &y, &y1, ctl)
            }
            None => 0.0,
        };

        if let Some(ctl) = ctl {
            if !err_norm.is_finite() {
                rejected += 1;
                just_rejected = true;
                dt = dt_step * ctl.factor_min;
                continue;
            }
            if err_norm > 1.0 {
                rejected += 1;
                just_rejected = true;
                let k = (tab.embedded_order() + 1) as f64;
                let factor = (ctl.safety * err_norm.powf(-0.7 / k)).clamp(ctl.factor_min, 1.0);
                dt = dt_step * factor;
                continue;
            }
        } else if update.iter().any(|v| !v.is_finite()) {
            return Err(IntegrationError::NonFiniteState { t });
        }

        let gamma = if options.relaxation {
            let relax = relaxation_gamma(system, &y, &update);
            if relax.fallback {
                fallbacks += 1;
            }
            relax.gamma
        } else {
            1.0
        };

        y.scaled_add(gamma, &update);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(IntegrationError::NonFiniteState { t });
        }
        t += gamma * dt_step;
        accepted += 1;
        observer(&StepRecord { t, dt: dt_step, gamma, err_norm }, &y);

        if let Some(ctl) = ctl {
            let k = (tab.embedded_order() + 1) as f64;
            let e = err_norm.max(1e-10);
            let mut factor =
                (ctl.safety * e.powf(-0.7 / k) * err_prev.powf(0.4 / k))
                    .clamp(ctl.factor_min, ctl.factor_max);
            if just_rejected {
                factor = factor.min(1.0);
            }
            just_rejected = false;
            err_prev = e;
            dt = dt_step * factor;
        }
    }

    Ok(Solution { t, y, accepted, rejected, relaxation_fallbacks: fallbacks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Scalar growth `y' = y`.
    struct Exponential;

    impl Integrable for Exponential {
        fn rhs(&self, _t: f64, y: &Array1<f64>, dy: &mut Array1<f64>) -> Result<(), ModelError> {
            dy.assign(y);
            Ok(())
        }

        fn relaxation_invariant(&self, y: &Array1<f64>) -> f64 {
            y[0]
        }
    }

    /// Harmonic oscillator with quadratic invariant `|y|^2`.
    struct Oscillator;

    impl Integrable for Oscillator {
        fn rhs(&self, _t: f64, y: &Array1<f64>, dy: &mut Array1<f64>) -> Result<(), ModelError> {
            dy[0] = y[1];
            dy[1] = -y[0];
            Ok(())
        }

        fn relaxation_invariant(&self, y: &Array1<f64>) -> f64 {
            y.dot(y)
        }
    }

    /// System whose relaxation invariant is `|y|^2`; the tendency is unused.
    struct Quadratic;

    impl Integrable for Quadratic {
        fn rhs(&self, _t: f64, _y: &Array1<f64>, dy: &mut Array1<f64>) -> Result<(), ModelError> {
            dy.fill(0.0);
            Ok(())
        }

        fn relaxation_invariant(&self, y: &Array1<f64>) -> f64 {
            y.dot(y)
        }
    }

    /// Scalar blow-up `y' = y^2`.
    struct Riccati;

    impl Integrable for Riccati {
        fn rhs(&self, _t: f64, y: &Array1<f64>, dy: &mut Array1<f64>) -> Result<(), ModelError> {
            dy[0] = y[0] * y[0];
            Ok(())
        }

        fn relaxation_invariant(&self, y: &Array1<f64>) -> f64 {
            y[0]
        }
    }

    #[test]
    fn adaptive_matches_exponential() {
        let y0 = ndarray::array![1.0];
        let ctl = StepControl { initial_dt: Some(0.05), ..StepControl::with_tolerance(1e-10) };
        let sol = integrate(
            &Exponential,
            &y0,
            0.0,
            0.1,
            &ButcherTableau::dormand_prince_54(),
            &IntegrateOptions::adaptive(ctl),
            |_, _| {},
        )
        .unwrap();
        assert_relative_eq!(sol.t, 0.1, epsilon = 1e-12);
        assert_relative_eq!(sol.y[0], 1.1051709180756476, epsilon = 1e-8);
    }

    #[test]
    fn oversized_initial_step_is_rejected_then_recovers() {
        let y0 = ndarray::array![1.0];
        let ctl = StepControl { initial_dt: Some(2.0), ..StepControl::with_tolerance(1e-12) };
        let sol = integrate(
            &Exponential,
            &y0,
            0.0,
            2.0,
            &ButcherTableau::dormand_prince_54(),
            &IntegrateOptions::adaptive(ctl),
            |_, _| {},
        )
        .unwrap();
        assert!(sol.rejected >= 1, "rejected {}", sol.rejected);
        assert_relative_eq!(sol.y[0], (2.0f64).exp(), max_relative = 1e-9);
    }

    #[test]
    fn fixed_step_convergence_orders() {
        // y' = y cos(t), y(0) = 1, exact solution exp(sin(t)).
        struct Modulated;
        impl Integrable for Modulated {
            fn rhs(&self, t: f64, y: &Array1<f64>, dy: &mut Array1<f64>) -> Result<(), ModelError> {
                dy[0] = y[0] * t.cos();
                Ok(())
            }
            fn relaxation_invariant(&self, _y: &Array1<f64>) -> f64 {
                0.0
            }
        }
        for (tab, expected) in [
            (ButcherTableau::dormand_prince_54(), 5.0),
            (ButcherTableau::bogacki_shampine_32(), 3.0),
        ] {
            let mut errors = Vec::new();
            for dt in [0.2, 0.1, 0.05] {
                let sol = integrate(
                    &Modulated,
                    &ndarray::array![1.0],
                    0.0,
                    2.0,
                    &tab,
                    &IntegrateOptions::fixed(dt),
                    |_, _| {},
                )
                .unwrap();
                errors.push((sol.y[0] - (2.0f64.sin()).exp()).abs());
            }
            for pair in errors.windows(2) {
                let eoc = (pair[0] / pair[1]).log2();
                assert!(
                    (eoc - expected).abs() < 0.35,
                    "{}: eoc {eoc} vs {expected}",
                    tab.name()
                );
            }
        }
    }

    #[test]
    fn fixed_step_counts_and_endpoint() {
        let sol = integrate(
            &Exponential,
            &ndarray::array![1.0],
            0.0,
            1.0,
            &ButcherTableau::bogacki_shampine_32(),
            &IntegrateOptions::fixed(0.1),
            |_, _| {},
        )
        .unwrap();
        assert_eq!(sol.accepted, 10);
        assert_relative_eq!(sol.t, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn relaxation_roots_match_quadratic_invariant() {
        // State (1, 0) with |y|^2 invariant; increments chosen so the
        // nontrivial root sits at 1, 1.25 (plain bracket), and 1.6 (widened).
        let y = ndarray::array![1.0, 0.0];
        let cases = [
            (ndarray::array![-0.1, 0.19f64.sqrt()], 1.0),
            (ndarray::array![-0.1, 0.15f64.sqrt()], 1.25),
            (ndarray::array![-0.1, 0.115f64.sqrt()], 1.6),
        ];
        for (dy, root) in cases {
            let relax = relaxation_gamma(&Quadratic, &y, &dy);
            assert!(!relax.fallback);
            assert_relative_eq!(relax.gamma, root, epsilon = 1e-10);
            assert!(relax.residual.abs() <= 1e-14);
        }
    }

    #[test]
    fn relaxation_falls_back_without_bracketed_root() {
        // Here the nontrivial root sits at gamma = 4, outside both brackets.
        let y = ndarray::array![1.0, 0.0];
        let dy = ndarray::array![-0.1, 0.2];
        let relax = relaxation_gamma(&Quadratic, &y, &dy);
        assert!(relax.fallback);
        assert_relative_eq!(relax.gamma, 1.0);
    }

    #[test]
    fn relaxation_conserves_oscillator_energy() {
        let y0 = ndarray::array![1.0, 0.0];
        let mut gammas = Vec::new();
        let sol = integrate(
            &Oscillator,
            &y0,
            0.0,
            50.0,
            &ButcherTableau::bogacki_shampine_32(),
            &IntegrateOptions::fixed(0.1).with_relaxation(true),
            |rec, _| gammas.push(rec.gamma),
        )
        .unwrap();
        assert_eq!(sol.relaxation_fallbacks, 0);
        let drift = (sol.y.dot(&sol.y) - 1.0).abs();
        assert!(drift <= 1e-12, "energy drift {drift:e}");
        // Solution stays on the circle and close to the exact phase.
        assert_relative_eq!(sol.y[0], sol.t.cos(), epsilon = 5e-3);
        assert!(gammas[1..].iter().all(|g| (g - 1.0).abs() < 0.1));
    }

    #[test]
    fn runge_kutta_preserves_linear_invariants() {
        // y' = (y1 - y0, y0 - y1) keeps y0 + y1 constant for any tableau.
        struct Exchange;
        impl Integrable for Exchange {
            fn rhs(&self, _t: f64, y: &Array1<f64>, dy: &mut Array1<f64>) -> Result<(), ModelError> {
                dy[0] = y[1] - y[0];
                dy[1] = y[0] - y[1];
                Ok(())
            }
            fn relaxation_invariant(&self, _y: &Array1<f64>) -> f64 {
                0.0
            }
        }
        let sol = integrate(
            &Exchange,
            &ndarray::array![0.9, 0.1],
            0.0,
            10.0,
            &ButcherTableau::dormand_prince_54(),
            &IntegrateOptions::adaptive(StepControl::default()),
            |_, _| {},
        )
        .unwrap();
        assert_relative_eq!(sol.y.sum(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn observer_sees_initial_state_and_accepted_steps() {
        let mut records = Vec::new();
        let sol = integrate(
            &Exponential,
            &ndarray::array![1.0],
            0.0,
            0.5,
            &ButcherTableau::bogacki_shampine_32(),
            &IntegrateOptions::fixed(0.1),
            |rec, y| records.push((rec.t, y[0])),
        )
        .unwrap();
        assert_eq!(records.len(), sol.accepted + 1);
        assert_eq!(records[0], (0.0, 1.0));
        assert!(records.windows(2).all(|w| w[1].0 > w[0].0));
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let y0 = ndarray::array![1.0];
        let tab = ButcherTableau::bogacki_shampine_32();
        let err = integrate(&Exponential, &y0, 1.0, 1.0, &tab, &IntegrateOptions::fixed(0.1), |_, _| {})
            .unwrap_err();
        assert!(matches!(err, IntegrationError::InvalidSpan { .. }));
        let bad = StepControl { abs_tol: 0.0, ..StepControl::default() };
        let err = integrate(&Exponential, &y0, 0.0, 1.0, &tab, &IntegrateOptions::adaptive(bad), |_, _| {})
            .unwrap_err();
        assert!(matches!(err, IntegrationError::InvalidControl(_)));
    }

    #[test]
    fn blow_up_is_reported() {
        let err = integrate(
            &Riccati,
            &ndarray::array![1.0],
            0.0,
            2.5,
            &ButcherTableau::dormand_prince_54(),
            &IntegrateOptions::fixed(0.5),
            |_, _| {},
        )
        .unwrap_err();
        assert!(matches!(
            err,
            IntegrationError::NonFiniteState { .. } | IntegrationError::StepSizeUnderflow { .. }
        ));
    }
}
