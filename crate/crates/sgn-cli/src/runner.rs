//! Executes a single configured simulation and writes its output files.
//!
//! Every run produces an invariants series (one row per accepted step); on
//! request it also records gauge time series of the free surface and state
//! snapshots at given times, interpolated linearly between accepted steps.

use crate::config::{MethodChoice, RunConfig};
use crate::csvio::{fmt_float, read_pairs, CsvFile};
use crate::model::{build, BuiltModel};
use crate::CliError;
use ndarray::Array1;
use sgn_core::diagnostics::{gauge_value, InvariantSeries};
use sgn_core::models::{field, Semidiscretization};
use sgn_core::time::{integrate, ButcherTableau, IntegrateOptions, StepControl, StepRecord};
use sgn_core::PeriodicGrid;
use std::path::PathBuf;
use std::time::{Duration, Instant};

/// Outcome of a run: reached time, step counts, drifts, and written files.
pub struct RunSummary {
    pub t: f64,
    pub accepted: usize,
    pub rejected: usize,
    pub relaxation_fallbacks: usize,
    pub mass_drift: f64,
    pub momentum_drift: f64,
    pub energy_drift: f64,
    pub energy_drift_relative: f64,
    /// Quadrature L2 norm of the initial tendency, per field.
    pub initial_rhs_norms: Vec<(&'static str, f64)>,
    pub wall: Duration,
    pub files: Vec<PathBuf>,
}

/// Tableau for a method choice.
pub fn tableau(method: MethodChoice) -> ButcherTableau {
    match method {
        MethodChoice::Dp54 => ButcherTableau::dormand_prince_54(),
        MethodChoice::Bs32 => ButcherTableau::bogacki_shampine_32(),
    }
}

/// Integration options from the time section of the configuration.
pub fn integrate_options(cfg: &RunConfig) -> IntegrateOptions {
    let options = match cfg.dt {
        Some(dt) => IntegrateOptions::fixed(dt),
        None => IntegrateOptions::adaptive(StepControl {
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
            ..StepControl::default()
        }),
    };
    options.with_relaxation(cfg.relaxation)
}

/// Runs the configured simulation, writing CSV outputs into the output
/// directory; file names start with the configured prefix.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let start = Instant::now();
    std::fs::create_dir_all(&cfg.output_dir)
        .map_err(|e| CliError::output(&cfg.output_dir, e))?;
    let BuiltModel { model, y0, grid, scenario: _ } = build(cfg)?;

    let initial_rhs_norms = rhs_field_norms(model.as_ref(), &y0)?;

    let path = |suffix: &str| cfg.output_dir.join(format!("{}_{suffix}.csv", cfg.prefix));
    let invariants_file =
        CsvFile::create(&path("invariants"), &["t", "mass", "momentum", "energy", "gamma", "dt"])?;
    let gauges_file = if cfg.gauges.is_empty() {
        None
    } else {
        let mut header = vec!["t".to_string()];
        header.extend((1..=cfg.gauges.len()).map(|i| format!("gauge{i}")));
        let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
        Some(CsvFile::create(&path("gauges"), &header_refs)?)
    };
    let mut snapshot_times = cfg.snapshot_times.clone();
    snapshot_times.sort_by(f64::total_cmp);

    let mut recorder = Recorder {
        model: model.as_ref(),
        grid: &grid,
        cfg,
        invariants_file,
        gauges_file,
        first_gauge_series: Vec::new(),
        snapshot_times,
        next_snapshot: 0,
        prev: None,
        series: InvariantSeries::new(),
        files: Vec::new(),
        error: None,
    };

    let tab = tableau(cfg.method);
    let options = integrate_options(cfg);
    let solution = integrate(model.as_ref(), &y0, 0.0, cfg.t_end, &tab, &options, |rec, y| {
        recorder.observe(rec, y);
    })?;
    if let Some(err) = recorder.error.take() {
        return Err(err);
    }
    for &missed in &recorder.snapshot_times[recorder.next_snapshot..] {
        eprintln!("warning: snapshot time {missed} lies beyond the reached time {}", solution.t);
    }

    let mut files = std::mem::take(&mut recorder.files);
    files.push(recorder.invariants_file.finish()?);
    if let Some(f) = recorder.gauges_file.take() {
        files.push(f.finish()?);
    }
    let final_path = path("final");
    write_snapshot(&final_path, &grid, model.as_ref(), &solution.y)?;
    files.push(final_path);

    if let Some(reference) = &cfg.reference_data {
        if recorder.first_gauge_series.is_empty() {
            eprintln!("warning: reference data given but no gauges configured; skipping overlay");
        } else {
            let overlay = path("overlay");
            write_overlay(&overlay, reference, &recorder.first_gauge_series)?;
            files.push(overlay);
        }
    }

    let series = recorder.series;
    Ok(RunSummary {
        t: solution.t,
        accepted: solution.accepted,
        rejected: solution.rejected,
        relaxation_fallbacks: solution.relaxation_fallbacks,
        mass_drift: series.mass_drift(),
        momentum_drift: series.momentum_drift(),
        energy_drift: series.energy_drift(),
        energy_drift_relative: series.energy_drift_relative(),
        initial_rhs_norms,
        wall: start.elapsed(),
        files,
    })
}

/// Prints the human-readable run report to stdout.
pub fn print_summary(cfg: &RunConfig, summary: &RunSummary) {
    println!(
        "run {} | model {} ({}) | {} order {} | n {} | seed {}",
        cfg.scenario,
        cfg.model,
        cfg.variant,
        cfg.operator.name(),
        cfg.order,
        cfg.n,
        cfg.seed
    );
    println!(
        "  reached t = {} in {} accepted / {} rejected steps ({} relaxation fallbacks)",
        summary.t, summary.accepted, summary.rejected, summary.relaxation_fallbacks
    );
    let norms: Vec<String> = summary
        .initial_rhs_norms
        .iter()
        .map(|(name, v)| format!("{name} {v:.3e}"))
        .collect();
    println!("  initial tendency L2 norms: {}", norms.join(", "));
    println!(
        "  drifts: mass {:.3e}, momentum {:.3e}, energy {:.3e} ({:.3e} relative)",
        summary.mass_drift,
        summary.momentum_drift,
        summary.energy_drift,
        summary.energy_drift_relative
    );
    for file in &summary.files {
        println!("  wrote {}", file.display());
    }
    println!("  wall time {:.3} s", summary.wall.as_secs_f64());
}

/// Per-field quadrature L2 norms of the tendency at the initial state.
fn rhs_field_norms(
    model: &dyn Semidiscretization,
    y0: &Array1<f64>,
) -> Result<Vec<(&'static str, f64)>, CliError> {
    let mut dy = Array1::zeros(y0.len());
    model.rhs(0.0, y0, &mut dy)?;
    let n = model.n_nodes();
    let mass = model.ops().mass();
    Ok(model
        .field_names()
        .iter()
        .enumerate()
        .map(|(i, name)| (*name, mass.norm(&field(&dy, i, n).to_owned())))
        .collect())
}

/// Writes one snapshot file with columns `x, b` and the state fields.
fn write_snapshot(
    path: &std::path::Path,
    grid: &PeriodicGrid,
    model: &dyn Semidiscretization,
    y: &Array1<f64>,
) -> Result<(), CliError> {
    let mut header = vec!["x", "b"];
    header.extend(model.field_names());
    let mut file = CsvFile::create(path, &header)?;
    let n = model.n_nodes();
    let b = model.bathymetry();
    for i in 0..n {
        let mut row = vec![grid.nodes()[i], b[i]];
        row.extend((0..model.n_fields()).map(|f| y[f * n + i]));
        file.float_row(&row)?;
    }
    file.finish()?;
    Ok(())
}

/// Pairs the first gauge's computed series with an experimental reference:
/// one row per reference sample inside the simulated time range.
fn write_overlay(
    path: &std::path::Path,
    reference: &std::path::Path,
    computed: &[(f64, f64)],
) -> Result<(), CliError> {
    let pairs = read_pairs(reference)?;
    let mut file = CsvFile::create(path, &["t", "reference", "computed"])?;
    let (t_first, t_last) = (computed[0].0, computed[computed.len() - 1].0);
    for &(t, value) in &pairs {
        if t < t_first || t > t_last {
            continue;
        }
        // Linear interpolation over the accepted-step series.
        let k = computed.partition_point(|&(tc, _)| tc < t).min(computed.len() - 1).max(1);
        let ((t0, v0), (t1, v1)) = (computed[k - 1], computed[k]);
        let value_computed =
            if t1 > t0 { v0 + (v1 - v0) * (t - t0) / (t1 - t0) } else { v0 };
        file.float_row(&[t, value, value_computed])?;
    }
    file.finish()?;
    Ok(())
}

/// Observer state: writes per-step rows and interpolated snapshots.
struct Recorder<'a> {
    model: &'a dyn Semidiscretization,
    grid: &'a PeriodicGrid,
    cfg: &'a RunConfig,
    invariants_file: CsvFile,
    gauges_file: Option<CsvFile>,
    first_gauge_series: Vec<(f64, f64)>,
    snapshot_times: Vec<f64>,
    next_snapshot: usize,
    prev: Option<(f64, Array1<f64>)>,
    series: InvariantSeries,
    files: Vec<PathBuf>,
    error: Option<CliError>,
}

impl Recorder<'_> {
    fn observe(&mut self, rec: &StepRecord, y: &Array1<f64>) {
        if self.error.is_some() {
            return;
        }
        if let Err(e) = self.observe_inner(rec, y) {
            self.error = Some(e);
        }
    }

    fn observe_inner(&mut self, rec: &StepRecord, y: &Array1<f64>) -> Result<(), CliError> {
        let mass = self.model.mass(y);
        let momentum = self.model.momentum(y);
        let energy = self.model.energy(y);
        self.series.push(rec.t, mass, momentum, energy, rec.gamma, rec.dt);
        self.invariants_file.float_row(&[rec.t, mass, momentum, energy, rec.gamma, rec.dt])?;

        if let Some(gauges) = &mut self.gauges_file {
            let n = self.model.n_nodes();
            let surface = &field(y, 0, n) + self.model.bathymetry();
            let mut row = vec![fmt_float(rec.t)];
            for (i, &x) in self.cfg.gauges.iter().enumerate() {
                let v = gauge_value(self.grid, &surface, x)?;
                if i == 0 {
                    self.first_gauge_series.push((rec.t, v));
                }
                row.push(fmt_float(v));
            }
            gauges.row(&row)?;
        }

        while self.next_snapshot < self.snapshot_times.len()
            && self.snapshot_times[self.next_snapshot] <= rec.t
        {
            let s = self.snapshot_times[self.next_snapshot];
            let state = match &self.prev {
                Some((t_prev, y_prev)) if s > *t_prev && rec.t > *t_prev => {
                    let theta = (s - t_prev) / (rec.t - t_prev);
                    y_prev * (1.0 - theta) + y * theta
                }
                _ => y.clone(),
            };
            let path = self
                .cfg
                .output_dir
                .join(format!("{}_snapshot_{}.csv", self.cfg.prefix, self.next_snapshot + 1));
            write_snapshot(&path, self.grid, self.model, &state)?;
            self.files.push(path);
            self.next_snapshot += 1;
        }

        self.prev = Some((rec.t, y.clone()));
        Ok(())
    }
}
