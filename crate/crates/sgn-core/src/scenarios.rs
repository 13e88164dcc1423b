//! Initial conditions, bathymetries, analytic references, and manufactured
//! sources for the experiment suite.
//!
//! Each scenario bundles a default domain, end time, resolution, bathymetry,
//! and initial height/velocity; the catalogue in [`Scenario`] exposes them
//! uniformly to the command-line harness. Construction is pure.

use crate::grid::PeriodicGrid;
use crate::models::hyperbolic::SourceTerms;
use crate::GRAVITY;
use ndarray::Array1;
use std::f64::consts::PI;
use std::sync::Arc;

/// Solitary-wave family of the SGN equations over a flat bottom.
#[derive(Debug, Clone, Copy)]
pub struct SolitonParams {
    /// Still-water depth far from the crest.
    pub h_inf: f64,
    /// Crest elevation above the still-water depth.
    pub amplitude: f64,
    /// Gravitational acceleration.
    pub g: f64,
}

impl Default for SolitonParams {
    fn default() -> Self {
        Self { h_inf: 1.0, amplitude: 0.2, g: GRAVITY }
    }
}

impl SolitonParams {
    /// Relative amplitude `A / h_inf`.
    pub fn epsilon(&self) -> f64 {
        self.amplitude / self.h_inf
    }

    /// Inverse width of the sech^2 profile.
    pub fn kappa(&self) -> f64 {
        let eps = self.epsilon();
        (3.0 * eps / (4.0 * self.h_inf * self.h_inf * (1.0 + eps))).sqrt()
    }

    /// Propagation speed.
    pub fn speed(&self) -> f64 {
        (self.g * self.h_inf * (1.0 + self.epsilon())).sqrt()
    }

    /// Time for one domain traversal.
    pub fn transit_time(&self, domain_length: f64) -> f64 {
        domain_length / self.speed()
    }

    /// Water height at `(x, t)` (no periodic wrapping).
    pub fn height(&self, x: f64, t: f64) -> f64 {
        let arg = self.kappa() * (x - self.speed() * t);
        self.h_inf * (1.0 + self.epsilon() / arg.cosh().powi(2))
    }

    /// Velocity at `(x, t)` (no periodic wrapping).
    pub fn velocity(&self, x: f64, t: f64) -> f64 {
        self.speed() * (1.0 - self.h_inf / self.height(x, t))
    }

    /// Samples `(h, u)` on the grid, wrapping the phase periodically so the
    /// wave re-enters the domain after each transit.
    pub fn sample(&self, grid: &PeriodicGrid, t: f64) -> (Array1<f64>, Array1<f64>) {
        let speed = self.speed();
        let length = grid.length();
        let x_min = grid.x_min();
        let wrap = |x: f64| x_min + (x - speed * t - x_min).rem_euclid(length);
        let h = grid.sample(|x| self.height(wrap(x), 0.0));
        let u = grid.sample(|x| self.velocity(wrap(x), 0.0));
        (h, u)
    }
}

/// Smoothed dam break producing a rarefaction and a dispersive shock wave.
#[derive(Debug, Clone, Copy)]
pub struct RiemannParams {
    /// Height on the left of the jump.
    pub h_left: f64,
    /// Height on the right of the jump.
    pub h_right: f64,
    /// Smoothing width of the tanh profile.
    pub alpha: f64,
    /// Jump location.
    pub x0: f64,
    /// Gravitational acceleration.
    pub g: f64,
}

impl Default for RiemannParams {
    fn default() -> Self {
        Self { h_left: 1.8, h_right: 1.0, alpha: 2.0, x0: 0.0, g: GRAVITY }
    }
}

/// Closed-form predictions for the dam-break wave fan.
#[derive(Debug, Clone, Copy)]
pub struct RiemannPredictions {
    /// Plateau height between the rarefaction and the dispersive shock.
    pub h_star: f64,
    /// Plateau velocity.
    pub u_star: f64,
    /// Leading solitary-wave amplitude above the right state.
    pub a_plus: f64,
    /// Absolute height of the leading crest.
    pub crest: f64,
}

impl RiemannParams {
    /// Initial water height.
    pub fn height(&self, x: f64) -> f64 {
        self.h_right
            + 0.5 * (self.h_left - self.h_right) * (1.0 - ((x - self.x0) / self.alpha).tanh())
    }

    /// Plateau and leading-wave predictions.
    pub fn predictions(&self) -> RiemannPredictions {
        let h_star = 0.25 * (self.h_left.sqrt() + self.h_right.sqrt()).powi(2);
        let u_star = 2.0 * ((self.g * h_star).sqrt() - (self.g * self.h_right).sqrt());
        let delta = (self.h_right - self.h_left).abs();
        let a_plus = delta - delta * delta / 12.0;
        RiemannPredictions { h_star, u_star, a_plus, crest: self.h_right + a_plus }
    }
}

/// Smoothed bore producing undular (Favre) waves.
#[derive(Debug, Clone, Copy)]
pub struct FavreParams {
    /// Downstream still-water depth.
    pub h0: f64,
    /// Nonlinearity: relative height of the jump.
    pub epsilon: f64,
    /// Smoothing width of the tanh profile.
    pub alpha: f64,
    /// Jump location.
    pub x0: f64,
    /// Gravitational acceleration.
    pub g: f64,
}

impl Default for FavreParams {
    fn default() -> Self {
        Self { h0: 1.0, epsilon: 0.2, alpha: 2.0, x0: -1000.0, g: GRAVITY }
    }
}

impl FavreParams {
    /// Height jump across the bore.
    pub fn height_jump(&self) -> f64 {
        self.epsilon * self.h0
    }

    /// Velocity jump from the shallow-water Rankine-Hugoniot relation.
    pub fn velocity_jump(&self) -> f64 {
        let h1 = (1.0 + self.epsilon) * self.h0;
        (self.g * (h1 + self.h0) / (2.0 * self.h0 * h1)).sqrt() * self.height_jump()
    }

    /// Froude number of the equivalent shallow-water shock.
    pub fn froude(&self) -> f64 {
        ((1.0 + self.epsilon) * (1.0 + 0.5 * self.epsilon)).sqrt()
    }

    /// Initial `(h, u)` at one node.
    pub fn initial(&self, x: f64) -> (f64, f64) {
        let shape = 0.5 * (1.0 - ((x - self.x0) / self.alpha).tanh());
        (self.h0 + self.height_jump() * shape, self.velocity_jump() * shape)
    }
}

/// Wave packet travelling over a trapezoidal bar, mimicking a laboratory
/// wave-maker experiment.
#[derive(Debug, Clone)]
pub struct DingemansParams {
    /// Still-water depth away from the bar.
    pub still_depth: f64,
    /// Packet amplitude.
    pub amplitude: f64,
    /// Packet phase offset; calibrated so the first crest reaches the first
    /// gauge near t = 25. Pure calibration constant, not physics.
    pub offset: f64,
    /// Gravitational acceleration.
    pub g: f64,
    /// Gauge positions where time series are recorded.
    pub gauges: Vec<f64>,
}

/// Calibrated packet shift for the default gauge set (first crest at the
/// first gauge at t = 25 +- 1).
pub const DINGEMANS_OFFSET: f64 = -12.0;

impl Default for DingemansParams {
    fn default() -> Self {
        Self {
            still_depth: 0.8,
            amplitude: 0.02,
            offset: DINGEMANS_OFFSET,
            g: GRAVITY,
            gauges: vec![3.04, 9.44, 20.04, 26.04, 30.44, 37.04],
        }
    }
}

impl DingemansParams {
    /// Packet wavenumber: the root of the deep-water dispersion relation
    /// `g k tanh(k d) = omega^2` for the period `2.02 sqrt(2)` used by the
    /// wave maker this setup replaces.
    pub fn wavenumber(&self) -> f64 {
        let omega = 2.0 * PI / (2.02 * std::f64::consts::SQRT_2);
        let target = omega * omega;
        // Newton iteration from the long-wave guess.
        let mut k = omega / (self.g * self.still_depth).sqrt();
        for _ in 0..50 {
            let th = (k * self.still_depth).tanh();
            let f = self.g * k * th - target;
            let fp = self.g * (th + k * self.still_depth * (1.0 - th * th));
            let step = f / fp;
            k -= step;
            if step.abs() < 1e-15 * k {
                break;
            }
        }
        k
    }

    /// Trapezoidal bar: rises 0 to 0.6 on [11.01, 23.04], stays flat to
    /// 27.04, and falls back to 0 by 33.07.
    pub fn bathymetry(&self, x: f64) -> f64 {
        if x < 11.01 || x > 33.07 {
            0.0
        } else if x < 23.04 {
            0.6 * (x - 11.01) / (23.04 - 11.01)
        } else if x < 27.04 {
            0.6
        } else {
            0.6 * (33.07 - x) / (33.07 - 27.04)
        }
    }

    /// Free-surface perturbation: eleven wavelengths of a cosine packet cut
    /// at zero crossings, shifted by the calibration offset.
    pub fn perturbation(&self, x: f64) -> f64 {
        let k = self.wavenumber();
        let lo = -30.5 * PI / k + self.offset;
        let hi = -8.5 * PI / k + self.offset;
        if x >= lo && x <= hi {
            self.amplitude * (k * (x - self.offset)).cos()
        } else {
            0.0
        }
    }

    /// Initial `(h, u)`: still water plus the packet, with the velocity set
    /// by the linear long-wave relation `u = sqrt(g/h) (h + b - d)`.
    pub fn initial(&self, x: f64) -> (f64, f64) {
        let b = self.bathymetry(x);
        let h = self.still_depth - b + self.perturbation(x);
        let u = (self.g / h).sqrt() * (h + b - self.still_depth);
        (h, u)
    }
}

/// Closed-form fields and forcing that make the variable-bathymetry
/// hyperbolic system hold exactly; used for grid-convergence studies.
///
/// The sources come from symbolic differentiation of the continuous system
/// and are independent of the relaxation parameter lambda because the
/// auxiliary elevation equals the water height exactly.
#[derive(Debug, Clone, Copy)]
pub struct ManufacturedSolution {
    /// Gravitational acceleration.
    pub g: f64,
}

impl Default for ManufacturedSolution {
    fn default() -> Self {
        Self { g: GRAVITY }
    }
}

impl ManufacturedSolution {
    /// Water height `7 + 2 cos(2 pi x) + cos(2 pi x - 4 pi t)`.
    pub fn height(&self, x: f64, t: f64) -> f64 {
        7.0 + 2.0 * (2.0 * PI * x).cos() + (2.0 * PI * x - 4.0 * PI * t).cos()
    }

    /// Velocity `sin(2 pi x - pi t)`.
    pub fn velocity(&self, x: f64, t: f64) -> f64 {
        (2.0 * PI * x - PI * t).sin()
    }

    /// Bathymetry `-5 - 2 cos(2 pi x)`.
    pub fn bathymetry(&self, x: f64) -> f64 {
        -5.0 - 2.0 * (2.0 * PI * x).cos()
    }

    /// Auxiliary vertical velocity `w = -h u_x`.
    pub fn vertical(&self, x: f64, t: f64) -> f64 {
        -self.height(x, t) * self.velocity_x(x, t)
    }

    /// Auxiliary elevation `eta = h`.
    pub fn elevation(&self, x: f64, t: f64) -> f64 {
        self.height(x, t)
    }

    fn height_t(&self, x: f64, t: f64) -> f64 {
        4.0 * PI * (2.0 * PI * x - 4.0 * PI * t).sin()
    }

    fn height_x(&self, x: f64, t: f64) -> f64 {
        -4.0 * PI * (2.0 * PI * x).sin() - 2.0 * PI * (2.0 * PI * x - 4.0 * PI * t).sin()
    }

    fn velocity_t(&self, x: f64, t: f64) -> f64 {
        -PI * (2.0 * PI * x - PI * t).cos()
    }

    fn velocity_x(&self, x: f64, t: f64) -> f64 {
        2.0 * PI * (2.0 * PI * x - PI * t).cos()
    }

    fn velocity_xx(&self, x: f64, t: f64) -> f64 {
        -4.0 * PI * PI * (2.0 * PI * x - PI * t).sin()
    }

    fn velocity_xt(&self, x: f64, t: f64) -> f64 {
        2.0 * PI * PI * (2.0 * PI * x - PI * t).sin()
    }

    fn bathymetry_x(&self, x: f64) -> f64 {
        4.0 * PI * (2.0 * PI * x).sin()
    }

    /// Forcing `(s_h, s_u, s_w, s_eta)` for the primitive tendencies.
    pub fn sources(&self, x: f64, t: f64) -> (f64, f64, f64, f64) {
        let h = self.height(x, t);
        let u = self.velocity(x, t);
        let (h_t, h_x) = (self.height_t(x, t), self.height_x(x, t));
        let (u_t, u_x) = (self.velocity_t(x, t), self.velocity_x(x, t));
        let s_h = h_t + h_x * u + h * u_x;
        let s_u = u_t + u * u_x + self.g * (h_x + self.bathymetry_x(x));
        let w_t = -(h_t * u_x + h * self.velocity_xt(x, t));
        let w_x = -(h_x * u_x + h * self.velocity_xx(x, t));
        let s_w = w_t + u * w_x;
        let s_eta = s_h + 1.5 * u * self.bathymetry_x(x);
        (s_h, s_u, s_w, s_eta)
    }
}

impl SourceTerms for ManufacturedSolution {
    fn add(
        &self,
        t: f64,
        x: &Array1<f64>,
        dh: &mut Array1<f64>,
        du: &mut Array1<f64>,
        dw: &mut Array1<f64>,
        deta: &mut Array1<f64>,
    ) {
        for (i, &xi) in x.iter().enumerate() {
            let (s_h, s_u, s_w, s_eta) = self.sources(xi, t);
            dh[i] += s_h;
            du[i] += s_u;
            dw[i] += s_w;
            deta[i] += s_eta;
        }
    }
}

/// Cosine bathymetry shared by the variable Gaussian and lake-at-rest tests.
pub fn cosine_bathymetry(x: f64) -> f64 {
    0.25 * (PI * x / 75.0).cos()
}

/// Catalogue of ready-made experiment setups.
#[derive(Debug, Clone)]
pub enum Scenario {
    /// Solitary wave on a flat bottom (grid convergence, error growth).
    Soliton(SolitonParams),
    /// Gaussian hump on a flat bottom (conservation tables).
    GaussianFlat,
    /// Gaussian hump over the cosine bathymetry.
    GaussianVariable,
    /// Still water over the cosine bathymetry (well-balancedness).
    LakeAtRest,
    /// Manufactured fields with closed-form forcing (design-order checks).
    Manufactured(ManufacturedSolution),
    /// Smoothed dam break (plateau and dispersive-shock predictions).
    Riemann(RiemannParams),
    /// Rectangular hump splitting into a solitary-wave train.
    SolitonFission,
    /// Smoothed bore shedding undular waves.
    FavreWaves(FavreParams),
    /// Wave packet over a trapezoidal bar with gauge records.
    DingemansBar(DingemansParams),
}

impl Scenario {
    /// All scenario names accepted by [`Scenario::from_name`].
    pub const NAMES: [&'static str; 9] = [
        "soliton",
        "gaussian-flat",
        "gaussian-variable",
        "lake-at-rest",
        "manufactured",
        "riemann",
        "fission",
        "favre",
        "dingemans",
    ];

    /// Looks up a scenario by name with default parameters.
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "soliton" => Some(Self::Soliton(SolitonParams::default())),
            "gaussian-flat" => Some(Self::GaussianFlat),
            "gaussian-variable" => Some(Self::GaussianVariable),
            "lake-at-rest" => Some(Self::LakeAtRest),
            "manufactured" => Some(Self::Manufactured(ManufacturedSolution::default())),
            "riemann" => Some(Self::Riemann(RiemannParams::default())),
            "fission" => Some(Self::SolitonFission),
            "favre" => Some(Self::FavreWaves(FavreParams::default())),
            "dingemans" => Some(Self::DingemansBar(DingemansParams::default())),
            _ => None,
        }
    }

    /// Canonical name.
    pub fn name(&self) -> &'static str {
        match self {
            Self::Soliton(_) => "soliton",
            Self::GaussianFlat => "gaussian-flat",
            Self::GaussianVariable => "gaussian-variable",
            Self::LakeAtRest => "lake-at-rest",
            Self::Manufactured(_) => "manufactured",
            Self::Riemann(_) => "riemann",
            Self::SolitonFission => "fission",
            Self::FavreWaves(_) => "favre",
            Self::DingemansBar(_) => "dingemans",
        }
    }

    /// Default periodic domain.
    pub fn default_domain(&self) -> (f64, f64) {
        match self {
            Self::Soliton(_) => (-50.0, 50.0),
            Self::GaussianFlat | Self::GaussianVariable | Self::LakeAtRest => (-150.0, 150.0),
            Self::Manufactured(_) => (0.0, 1.0),
            Self::Riemann(_) => (-600.0, 600.0),
            Self::SolitonFission => (-500.0, 500.0),
            Self::FavreWaves(_) => (-3000.0, 3000.0),
            Self::DingemansBar(_) => (-140.0, 100.0),
        }
    }

    /// Default end time.
    pub fn default_t_end(&self) -> f64 {
        match self {
            Self::Soliton(p) => {
                let (a, b) = self.default_domain();
                p.transit_time(b - a)
            }
            Self::GaussianFlat | Self::GaussianVariable | Self::LakeAtRest => 35.0,
            Self::Manufactured(_) => 1.0,
            Self::Riemann(_) => 47.434,
            Self::SolitonFission => 118.0,
            Self::FavreWaves(_) => 150.0,
            Self::DingemansBar(_) => 40.0,
        }
    }

    /// Default node count.
    pub fn default_n(&self) -> usize {
        match self {
            Self::Soliton(_) => 512,
            Self::GaussianFlat | Self::GaussianVariable | Self::LakeAtRest => 1000,
            Self::Manufactured(_) => 64,
            Self::Riemann(_) => 4000,
            Self::SolitonFission => 1000,
            Self::FavreWaves(_) => 6000,
            Self::DingemansBar(_) => 1000,
        }
    }

    /// True when the bathymetry vanishes identically.
    pub fn is_flat(&self) -> bool {
        matches!(
            self,
            Self::Soliton(_) | Self::GaussianFlat | Self::Riemann(_) | Self::SolitonFission
                | Self::FavreWaves(_)
        )
    }

    /// Bathymetry sampled on the grid.
    pub fn bathymetry(&self, grid: &PeriodicGrid) -> Array1<f64> {
        match self {
            Self::GaussianVariable | Self::LakeAtRest => grid.sample(cosine_bathymetry),
            Self::Manufactured(m) => grid.sample(|x| m.bathymetry(x)),
            Self::DingemansBar(p) => grid.sample(|x| p.bathymetry(x)),
            _ => Array1::zeros(grid.n()),
        }
    }

    /// Initial `(h, u)` sampled on the grid.
    pub fn initial_height_velocity(&self, grid: &PeriodicGrid) -> (Array1<f64>, Array1<f64>) {
        match self {
            Self::Soliton(p) => p.sample(grid, 0.0),
            Self::GaussianFlat => {
                (grid.sample(|x| 1.0 + (-x * x).exp()), Array1::from_elem(grid.n(), 1e-2))
            }
            Self::GaussianVariable => (
                grid.sample(|x| 1.0 + (-x * x).exp() - cosine_bathymetry(x)),
                Array1::from_elem(grid.n(), 1e-2),
            ),
            Self::LakeAtRest => {
                (grid.sample(|x| 1.0 - cosine_bathymetry(x)), Array1::zeros(grid.n()))
            }
            Self::Manufactured(m) => {
                (grid.sample(|x| m.height(x, 0.0)), grid.sample(|x| m.velocity(x, 0.0)))
            }
            Self::Riemann(p) => (grid.sample(|x| p.height(x)), Array1::zeros(grid.n())),
            Self::SolitonFission => (
                grid.sample(|x| if x.abs() < 1.0 { 1.8 } else { 1.0 }),
                Array1::zeros(grid.n()),
            ),
            Self::FavreWaves(p) => {
                let h = grid.sample(|x| p.initial(x).0);
                let u = grid.sample(|x| p.initial(x).1);
                (h, u)
            }
            Self::DingemansBar(p) => {
                let h = grid.sample(|x| p.initial(x).0);
                let u = grid.sample(|x| p.initial(x).1);
                (h, u)
            }
        }
    }

    /// Forcing terms for the hyperbolic model, when the scenario has any.
    pub fn hyperbolic_sources(&self) -> Option<Arc<dyn SourceTerms>> {
        match self {
            Self::Manufactured(m) => Some(Arc::new(*m)),
            _ => None,
        }
    }
}
