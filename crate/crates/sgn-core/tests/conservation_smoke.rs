//! Short production-like runs checking that relaxation holds the discrete
//! energy to roundoff while mass stays conserved, for both SGN models and
//! for flat and variable bathymetry.

use ndarray::Array1;
use sgn_core::diagnostics::InvariantSeries;
use sgn_core::models::hyperbolic::HyperbolicModel;
use sgn_core::models::original::OriginalModel;
use sgn_core::models::{pack, BathymetryVariant, Semidiscretization};
use sgn_core::scenarios::Scenario;
use sgn_core::time::{integrate, ButcherTableau, IntegrateOptions, Solution, StepControl, Stepping};
use sgn_core::{OperatorSet, PeriodicGrid, GRAVITY};

fn series_of<S: Semidiscretization>(
    model: &S,
    y0: &Array1<f64>,
    t_end: f64,
    options: &IntegrateOptions,
    tab: &ButcherTableau,
) -> (Solution, InvariantSeries) {
    let mut series = InvariantSeries::new();
    let sol = integrate(model, y0, 0.0, t_end, tab, options, |rec, y| {
        series.push(rec.t, model.mass(y), model.momentum(y), model.energy(y), rec.gamma, rec.dt);
    })
    .unwrap();
    (sol, series)
}

fn gaussian_state(scenario: &Scenario, ops: &OperatorSet) -> (Array1<f64>, Array1<f64>) {
    scenario.initial_height_velocity(ops.grid())
}

#[test]
fn relaxed_original_model_holds_energy_to_roundoff() {
    let scenario = Scenario::from_name("gaussian-flat").unwrap();
    let (a, b) = scenario.default_domain();
    let grid = PeriodicGrid::new(a, b, 300).unwrap();
    let ops = OperatorSet::central(grid, 2).unwrap();
    let (h, u) = gaussian_state(&scenario, &ops);
    let n = ops.grid().n();
    let model = OriginalModel::new(ops, GRAVITY, Array1::zeros(n), BathymetryVariant::Flat).unwrap();
    let y0 = pack(&[&h, &u]);
    let opts = IntegrateOptions::fixed(0.1).with_relaxation(true);
    let (sol, series) = series_of(&model, &y0, 6.0, &opts, &ButcherTableau::dormand_prince_54());
    assert_eq!(sol.relaxation_fallbacks, 0);
    assert!(series.mass_drift() <= 1e-12, "mass drift {}", series.mass_drift());
    assert!(
        series.energy_drift_relative() <= 1e-13,
        "energy drift {}",
        series.energy_drift_relative()
    );
    // The flat classical system also conserves momentum semidiscretely, so
    // only the O(dt^5) time-integration drift remains.
    assert!(series.momentum_drift() <= 1e-6, "momentum drift {}", series.momentum_drift());
}

#[test]
fn relaxed_hyperbolic_model_holds_energy_to_roundoff() {
    let scenario = Scenario::from_name("gaussian-flat").unwrap();
    let (a, b) = scenario.default_domain();
    let grid = PeriodicGrid::new(a, b, 300).unwrap();
    let ops = OperatorSet::central(grid, 2).unwrap();
    let (h, u) = gaussian_state(&scenario, &ops);
    let model = HyperbolicModel::flat(ops, GRAVITY, 500.0);
    let (w, eta) = model.init_auxiliary(&h, &u);
    let y0 = pack(&[&h, &u, &w, &eta]);
    let opts = IntegrateOptions::fixed(0.01).with_relaxation(true);
    let (sol, series) = series_of(&model, &y0, 1.0, &opts, &ButcherTableau::dormand_prince_54());
    assert_eq!(sol.relaxation_fallbacks, 0);
    assert!(series.mass_drift() <= 1e-12, "mass drift {}", series.mass_drift());
    assert!(
        series.energy_drift_relative() <= 1e-13,
        "energy drift {}",
        series.energy_drift_relative()
    );
}

#[test]
fn relaxed_variable_bathymetry_runs_conserve_energy() {
    let scenario = Scenario::from_name("gaussian-variable").unwrap();
    let (a, b) = scenario.default_domain();
    for (variant, upwind) in [
        (BathymetryVariant::MildSlope, false),
        (BathymetryVariant::FullSystem, true),
    ] {
        let grid = PeriodicGrid::new(a, b, 300).unwrap();
        let ops = if upwind {
            OperatorSet::upwind(grid, 2).unwrap()
        } else {
            OperatorSet::central(grid, 2).unwrap()
        };
        let bath = scenario.bathymetry(ops.grid());
        let (h, u) = gaussian_state(&scenario, &ops);
        let model = OriginalModel::new(ops, GRAVITY, bath, variant).unwrap();
        let y0 = pack(&[&h, &u]);
        let opts = IntegrateOptions::fixed(0.1).with_relaxation(true);
        let (sol, series) =
            series_of(&model, &y0, 4.0, &opts, &ButcherTableau::dormand_prince_54());
        assert_eq!(sol.relaxation_fallbacks, 0, "{variant:?}");
        assert!(series.mass_drift() <= 1e-12, "{variant:?}: mass {}", series.mass_drift());
        assert!(
            series.energy_drift_relative() <= 1e-13,
            "{variant:?}: energy {}",
            series.energy_drift_relative()
        );
    }
}

#[test]
fn adaptive_relaxed_soliton_run_is_well_behaved() {
    let scenario = Scenario::from_name("soliton").unwrap();
    let (a, b) = scenario.default_domain();
    let grid = PeriodicGrid::new(a, b, 128).unwrap();
    let ops = OperatorSet::central(grid, 4).unwrap();
    let (h, u) = scenario.initial_height_velocity(ops.grid());
    let n = ops.grid().n();
    let model = OriginalModel::new(ops, GRAVITY, Array1::zeros(n), BathymetryVariant::Flat).unwrap();
    let y0 = pack(&[&h, &u]);
    let opts = IntegrateOptions {
        stepping: Stepping::Adaptive(StepControl::with_tolerance(1e-6)),
        relaxation: true,
        max_steps: 1_000_000,
    };
    let mut gammas = Vec::new();
    let mut series = InvariantSeries::new();
    let sol = integrate(
        &model,
        &y0,
        0.0,
        5.0,
        &ButcherTableau::dormand_prince_54(),
        &opts,
        |rec, y| {
            gammas.push(rec.gamma);
            series.push(rec.t, model.mass(y), model.momentum(y), model.energy(y), rec.gamma, rec.dt);
        },
    )
    .unwrap();
    assert!(sol.accepted > 10);
    // Relaxation rescales the time increment, so the run lands within
    // (gamma - 1) * dt of the requested end time rather than exactly on it.
    assert!((sol.t - 5.0).abs() <= 1e-4, "t = {}", sol.t);
    assert!(gammas.iter().skip(1).all(|g| (g - 1.0).abs() < 0.2), "gamma strayed: {gammas:?}");
    assert!(series.energy_drift_relative() <= 1e-13);
    // Artificial viscosity off, relaxation on: the height stays positive and
    // bounded by the initial crest within dispersive-ripple tolerance.
    let h_end = sgn_core::models::field(&sol.y, 0, n);
    assert!(h_end.iter().all(|&v| v > 0.9 && v < 1.25));
}
