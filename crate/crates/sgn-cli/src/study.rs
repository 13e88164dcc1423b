//! Parameter studies: sweeps over resolution, relaxation stiffness, step
//! size, and bore strength, plus long-time error growth.
//!
//! Studies run their sub-cases sequentially in the listed order; a failing
//! sub-case is recorded in the `status` column of its row and the sweep
//! continues. Each study writes one CSV table into the output directory.

use crate::config::{ModelChoice, RunConfig};
use crate::csvio::{fmt_float, CsvFile};
use crate::model::{build, BuiltModel};
use crate::runner::{integrate_options, tableau};
use crate::CliError;
use ndarray::Array1;
use sgn_core::diagnostics::{growth_exponent, l2_error, InvariantSeries};
use sgn_core::models::field;
use sgn_core::scenarios::Scenario;
use sgn_core::time::integrate;
use sgn_core::PeriodicGrid;
use std::path::PathBuf;
use std::time::{Duration, Instant};

/// Available study kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyKind {
    /// Error against an exact solution over a list of grid sizes.
    GridConvergence,
    /// Error of the hyperbolic approximation over a list of lambda values.
    LambdaConvergence,
    /// Invariant drifts over a list of fixed step sizes.
    DtConservation,
    /// Leading undular-bore amplitude over a list of bore strengths.
    FroudeSweep,
    /// Error against the exact soliton over many domain transits.
    ErrorGrowth,
}

impl StudyKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::GridConvergence => "grid-convergence",
            Self::LambdaConvergence => "lambda-convergence",
            Self::DtConservation => "dt-conservation",
            Self::FroudeSweep => "froude-sweep",
            Self::ErrorGrowth => "error-growth",
        }
    }
}

/// A study: the base run configuration plus the sweep lists.
pub struct StudyConfig {
    pub kind: StudyKind,
    pub base: RunConfig,
    pub sizes: Vec<usize>,
    pub lambdas: Vec<f64>,
    pub dts: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub transits: usize,
}

/// Result of a study: the table path and sweep statistics.
pub struct StudyOutcome {
    pub path: PathBuf,
    pub rows: usize,
    pub failures: usize,
    pub wall: Duration,
}

/// Runs the study and writes its CSV table.
pub fn run_study(study: &StudyConfig) -> Result<StudyOutcome, CliError> {
    let start = Instant::now();
    std::fs::create_dir_all(&study.base.output_dir)
        .map_err(|e| CliError::output(&study.base.output_dir, e))?;
    let path = study
        .base
        .output_dir
        .join(format!("{}_{}.csv", study.base.prefix, study.kind.name()));

    let (rows, failures) = match study.kind {
        StudyKind::GridConvergence => grid_convergence(study, &path)?,
        StudyKind::LambdaConvergence => lambda_convergence(study, &path)?,
        StudyKind::DtConservation => dt_conservation(study, &path)?,
        StudyKind::FroudeSweep => froude_sweep(study, &path)?,
        StudyKind::ErrorGrowth => error_growth(study, &path)?,
    };
    Ok(StudyOutcome { path, rows, failures, wall: start.elapsed() })
}

/// Exact `(h, u)` of the scenario at time `t`, when it has one.
fn exact_height_velocity(
    scenario: &Scenario,
    grid: &PeriodicGrid,
    t: f64,
) -> Option<(Array1<f64>, Array1<f64>)> {
    match scenario {
        Scenario::Soliton(p) => Some(p.sample(grid, t)),
        Scenario::Manufactured(m) => {
            Some((grid.sample(|x| m.height(x, t)), grid.sample(|x| m.velocity(x, t))))
        }
        _ => None,
    }
}

/// Integrates one sub-case to its end and returns `(t, y, grid, scenario)`.
fn run_case(cfg: &RunConfig) -> Result<(f64, Array1<f64>, BuiltModel), CliError> {
    let built = build(cfg)?;
    let tab = tableau(cfg.method);
    let options = integrate_options(cfg);
    let sol = integrate(built.model.as_ref(), &built.y0, 0.0, cfg.t_end, &tab, &options, |_, _| {})?;
    Ok((sol.t, sol.y, built))
}

/// L2 errors of `(h, u)` against the exact solution at the reached time.
fn final_errors(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    let (t, y, built) = run_case(cfg)?;
    let (he, ue) = exact_height_velocity(&built.scenario, &built.grid, t).ok_or_else(|| {
        CliError::Study(format!(
            "scenario '{}' has no exact solution; use soliton or manufactured",
            cfg.scenario
        ))
    })?;
    let n = built.grid.n();
    let mass = built.model.ops().mass();
    let err_h = l2_error(&field(&y, 0, n).to_owned(), &he, mass)?;
    let err_u = l2_error(&field(&y, 1, n).to_owned(), &ue, mass)?;
    Ok((err_h, err_u))
}

/// Order of convergence between two rows of a sweep with scale ratio `r > 1`:
/// positive when the error shrinks as the scale grows.
fn pair_eoc(err_prev: f64, err: f64, scale_prev: f64, scale: f64) -> f64 {
    (err_prev / err).ln() / (scale / scale_prev).ln()
}

fn status_cell(result: &CliError) -> String {
    format!("error: {}", result.to_string().replace(',', ";"))
}

fn grid_convergence(study: &StudyConfig, path: &std::path::Path) -> Result<(usize, usize), CliError> {
    let mut table = CsvFile::create(path, &["n", "err_h", "eoc_h", "err_u", "eoc_u", "status"])?;
    let mut failures = 0;
    let mut last_ok: Option<(f64, f64, f64)> = None;
    for &n in &study.sizes {
        let mut cfg = study.base.clone();
        cfg.n = n;
        match final_errors(&cfg) {
            Ok((err_h, err_u)) => {
                let (eoc_h, eoc_u) = match last_ok {
                    Some((n0, eh0, eu0)) => (
                        fmt_float(pair_eoc(eh0, err_h, n0, n as f64)),
                        fmt_float(pair_eoc(eu0, err_u, n0, n as f64)),
                    ),
                    None => (String::new(), String::new()),
                };
                println!("grid-convergence n = {n}: err_h = {err_h:.6e}, err_u = {err_u:.6e}");
                table.row(&[
                    n.to_string(),
                    fmt_float(err_h),
                    eoc_h,
                    fmt_float(err_u),
                    eoc_u,
                    "ok".into(),
                ])?;
                last_ok = Some((n as f64, err_h, err_u));
            }
            Err(e) => {
                failures += 1;
                println!("grid-convergence n = {n}: failed ({e})");
                table.row(&[
                    n.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    status_cell(&e),
                ])?;
            }
        }
    }
    table.finish()?;
    Ok((study.sizes.len(), failures))
}

fn lambda_convergence(
    study: &StudyConfig,
    path: &std::path::Path,
) -> Result<(usize, usize), CliError> {
    if study.base.model != ModelChoice::SgnHyperbolic {
        return Err(CliError::Study(
            "lambda-convergence sweeps the relaxation parameter of sgn-hyperbolic".into(),
        ));
    }
    let mut table =
        CsvFile::create(path, &["lambda", "err_h", "eoc_h", "err_u", "eoc_u", "status"])?;
    let mut failures = 0;
    let mut last_ok: Option<(f64, f64, f64)> = None;
    for &lambda in &study.lambdas {
        let mut cfg = study.base.clone();
        cfg.lambda = lambda;
        match final_errors(&cfg) {
            Ok((err_h, err_u)) => {
                let (eoc_h, eoc_u) = match last_ok {
                    Some((l0, eh0, eu0)) => (
                        fmt_float(pair_eoc(eh0, err_h, l0, lambda)),
                        fmt_float(pair_eoc(eu0, err_u, l0, lambda)),
                    ),
                    None => (String::new(), String::new()),
                };
                println!(
                    "lambda-convergence lambda = {lambda:e}: err_h = {err_h:.6e}, err_u = {err_u:.6e}"
                );
                table.row(&[
                    fmt_float(lambda),
                    fmt_float(err_h),
                    eoc_h,
                    fmt_float(err_u),
                    eoc_u,
                    "ok".into(),
                ])?;
                last_ok = Some((lambda, err_h, err_u));
            }
            Err(e) => {
                failures += 1;
                println!("lambda-convergence lambda = {lambda:e}: failed ({e})");
                table.row(&[
                    fmt_float(lambda),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    status_cell(&e),
                ])?;
            }
        }
    }
    table.finish()?;
    Ok((study.lambdas.len(), failures))
}

fn dt_conservation(study: &StudyConfig, path: &std::path::Path) -> Result<(usize, usize), CliError> {
    let mut table = CsvFile::create(
        path,
        &["dt", "err_mass", "err_momentum", "err_energy", "eoc_energy", "status"],
    )?;
    let mut failures = 0;
    let mut last_ok: Option<(f64, f64)> = None;
    for &dt in &study.dts {
        let mut cfg = study.base.clone();
        cfg.dt = Some(dt);
        match invariant_drifts(&cfg) {
            Ok((mass, momentum, energy)) => {
                let eoc = match last_ok {
                    // Scale is 1/dt, so the order is positive when the error
                    // shrinks with the step size.
                    Some((dt0, e0)) => fmt_float(pair_eoc(e0, energy, 1.0 / dt0, 1.0 / dt)),
                    None => String::new(),
                };
                println!(
                    "dt-conservation dt = {dt}: mass {mass:.2e}, momentum {momentum:.2e}, energy {energy:.2e}"
                );
                table.row(&[
                    fmt_float(dt),
                    fmt_float(mass),
                    fmt_float(momentum),
                    fmt_float(energy),
                    eoc,
                    "ok".into(),
                ])?;
                last_ok = Some((dt, energy));
            }
            Err(e) => {
                failures += 1;
                println!("dt-conservation dt = {dt}: failed ({e})");
                table.row(&[
                    fmt_float(dt),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    status_cell(&e),
                ])?;
            }
        }
    }
    table.finish()?;
    Ok((study.dts.len(), failures))
}

/// Absolute drifts `|I(T) - I(0)|` of mass, momentum, and energy.
fn invariant_drifts(cfg: &RunConfig) -> Result<(f64, f64, f64), CliError> {
    let built = build(cfg)?;
    let tab = tableau(cfg.method);
    let options = integrate_options(cfg);
    let model = built.model.as_ref();
    let mut series = InvariantSeries::new();
    integrate(model, &built.y0, 0.0, cfg.t_end, &tab, &options, |rec, y| {
        series.push(rec.t, model.mass(y), model.momentum(y), model.energy(y), rec.gamma, rec.dt);
    })?;
    Ok((
        series.mass_drift().abs(),
        series.momentum_drift().abs(),
        series.energy_drift().abs(),
    ))
}

fn froude_sweep(study: &StudyConfig, path: &std::path::Path) -> Result<(usize, usize), CliError> {
    let mut table = CsvFile::create(path, &["epsilon", "froude", "a_max", "status"])?;
    let mut failures = 0;
    let mut computed: Vec<(f64, f64)> = Vec::new();
    for &epsilon in &study.epsilons {
        let mut cfg = study.base.clone();
        cfg.epsilon = epsilon;
        let froude = match cfg.scenario_object()? {
            Scenario::FavreWaves(p) => p.froude(),
            _ => {
                return Err(CliError::Study(
                    "froude-sweep requires the favre scenario".into(),
                ))
            }
        };
        match leading_amplitude(&cfg) {
            Ok(a_max) => {
                println!("froude-sweep epsilon = {epsilon}: Fr = {froude:.4}, a_max = {a_max:.6e}");
                table.row(&[
                    fmt_float(epsilon),
                    fmt_float(froude),
                    fmt_float(a_max),
                    "ok".into(),
                ])?;
                computed.push((froude, a_max));
            }
            Err(e) => {
                failures += 1;
                println!("froude-sweep epsilon = {epsilon}: failed ({e})");
                table.row(&[
                    fmt_float(epsilon),
                    fmt_float(froude),
                    String::new(),
                    status_cell(&e),
                ])?;
            }
        }
    }
    table.finish()?;

    if let Some(reference) = &study.base.reference_data {
        if computed.len() < 2 {
            eprintln!("warning: too few successful sweep points for a reference overlay");
        } else {
            computed.sort_by(|a, b| a.0.total_cmp(&b.0));
            let overlay_path = study
                .base
                .output_dir
                .join(format!("{}_froude-overlay.csv", study.base.prefix));
            write_froude_overlay(&overlay_path, reference, &computed)?;
        }
    }
    Ok((study.epsilons.len(), failures))
}

/// Pairs reference `(Fr, a_max)` samples with the computed sweep, linearly
/// interpolated in the Froude number; samples outside the sweep are skipped.
fn write_froude_overlay(
    path: &std::path::Path,
    reference: &std::path::Path,
    computed: &[(f64, f64)],
) -> Result<(), CliError> {
    let pairs = crate::csvio::read_pairs(reference)?;
    let mut file = CsvFile::create(path, &["froude", "reference", "computed"])?;
    let (lo, hi) = (computed[0].0, computed[computed.len() - 1].0);
    for &(froude, a_ref) in &pairs {
        if froude < lo || froude > hi {
            continue;
        }
        let k = computed.partition_point(|&(f, _)| f < froude).min(computed.len() - 1).max(1);
        let ((f0, a0), (f1, a1)) = (computed[k - 1], computed[k]);
        let a_computed = if f1 > f0 { a0 + (a1 - a0) * (froude - f0) / (f1 - f0) } else { a0 };
        file.float_row(&[froude, a_ref, a_computed])?;
    }
    file.finish()?;
    Ok(())
}

/// Height of the tallest undulation above the downstream depth.
fn leading_amplitude(cfg: &RunConfig) -> Result<f64, CliError> {
    let (_, y, built) = run_case(cfg)?;
    let Scenario::FavreWaves(p) = built.scenario else {
        return Err(CliError::Study("froude-sweep requires the favre scenario".into()));
    };
    let n = built.grid.n();
    let h_max = field(&y, 0, n).iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    Ok(h_max - p.h0)
}

fn error_growth(study: &StudyConfig, path: &std::path::Path) -> Result<(usize, usize), CliError> {
    let mut cfg = study.base.clone();
    let scenario = cfg.scenario_object()?;
    let Scenario::Soliton(params) = scenario else {
        return Err(CliError::Study("error-growth tracks the soliton scenario".into()));
    };
    let transit = params.transit_time(cfg.domain.1 - cfg.domain.0);
    cfg.t_end = study.transits as f64 * transit;

    let built = build(&cfg)?;
    let model = built.model.as_ref();
    let grid = &built.grid;
    let mass = model.ops().mass();
    let n = grid.n();
    let tab = tableau(cfg.method);
    let options = integrate_options(&cfg);

    let mut table = CsvFile::create(path, &["t", "error"])?;
    let mut times = Vec::new();
    let mut errors = Vec::new();
    let mut series = InvariantSeries::new();
    let mut io_error: Option<CliError> = None;
    integrate(model, &built.y0, 0.0, cfg.t_end, &tab, &options, |rec, y| {
        if io_error.is_some() {
            return;
        }
        series.push(rec.t, model.mass(y), model.momentum(y), model.energy(y), rec.gamma, rec.dt);
        let (he, ue) = params.sample(grid, rec.t);
        let eh = mass.norm(&(&field(y, 0, n) - &he));
        let eu = mass.norm(&(&field(y, 1, n) - &ue));
        let err = eh.hypot(eu);
        if rec.t > 0.0 {
            times.push(rec.t);
            errors.push(err);
        }
        if let Err(e) = table.float_row(&[rec.t, err]) {
            io_error = Some(e);
        }
    })?;
    if let Some(e) = io_error {
        return Err(e);
    }
    table.finish()?;

    let exponent = growth_exponent(&times, &errors)?;
    println!(
        "error-growth over {} transits: exponent {:.3}, relative energy drift {:.3e}, final error {:.6e}",
        study.transits,
        exponent,
        series.energy_drift_relative(),
        errors.last().copied().unwrap_or(f64::NAN)
    );
    Ok((times.len(), 0))
}
