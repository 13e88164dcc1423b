//! Command-line harness around the solver library: single runs, parameter
//! studies, operator verification, and scenario listing.
//!
//! Everything here is deterministic: identical configurations (including the
//! seed tag) produce byte-identical CSV outputs.

pub mod cli;
pub mod config;
pub mod csvio;
pub mod model;
pub mod runner;
pub mod study;

use clap::Parser;
use cli::{CheckOperatorsArgs, Cli, Command, RunArgs, StudyArgs, StudyKindArg};
use config::{ConfigError, FileConfig, ModelChoice, Overrides, RunConfig};
use sgn_core::error::DiagnosticsError;
use sgn_core::sbp::{
    build_upwind_pair, sbp_residuals_central, sbp_residuals_pair, SbpResiduals, CENTRAL_ORDERS,
    UPWIND_ORDERS,
};
use sgn_core::{IntegrationError, MassMatrix, ModelError, PeriodicGrid, SbpError};
use std::path::{Path, PathBuf};
use study::{StudyConfig, StudyKind};
use thiserror::Error;

/// Environment variable that supplies the default output directory.
pub const OUTPUT_DIR_ENV: &str = "SGN_OUTPUT_DIR";

/// Everything that can go wrong in the harness; [`CliError::exit_code`] maps
/// configuration problems to status 1 and numerical failures to status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot use reference data {path}: {reason}")]
    Reference { path: PathBuf, reason: String },
    #[error(transparent)]
    Operators(#[from] SbpError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error("study setup: {0}")]
    Study(String),
    #[error("{failures} operator identity check(s) failed")]
    OperatorCheck { failures: usize },
}

impl CliError {
    /// Wraps an I/O error with the path it concerns.
    pub fn output(path: &Path, source: std::io::Error) -> Self {
        Self::Output {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Process exit status: 0 is success, 1 a configuration or I/O problem,
    /// 2 a numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_)
            | Self::Output { .. }
            | Self::Reference { .. }
            | Self::Operators(_)
            | Self::Study(_) => 1,
            Self::Model(_)
            | Self::Integration(_)
            | Self::Diagnostics(_)
            | Self::OperatorCheck { .. } => 2,
        }
    }
}

/// Parses the process arguments, runs the selected command, and returns the
/// process exit status.
pub fn run_cli() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests print to stdout and exit cleanly.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Study(args) => cmd_study(args),
        Command::CheckOperators(args) => cmd_check_operators(&args),
        Command::ListScenarios => {
            cmd_list_scenarios();
            Ok(())
        }
    }
}

/// Loads the config file named by `--config`, if any.
fn load_file(config: Option<&Path>) -> Result<FileConfig, CliError> {
    match config {
        Some(path) => Ok(FileConfig::load(path)?),
        None => Ok(FileConfig::default()),
    }
}

fn env_output_dir() -> Option<PathBuf> {
    std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from)
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let file = load_file(args.common.config.as_deref())?;
    let over = Overrides {
        gauges: args.gauges,
        snapshot_times: args.snapshot_times,
        ..args.common.overrides()
    };
    let cfg = RunConfig::builder()
        .with_file(file)
        .with_overrides(over)
        .with_env_output_dir(env_output_dir())
        .build()?;
    let summary = runner::run(&cfg)?;
    runner::print_summary(&cfg, &summary);
    Ok(())
}

fn cmd_study(args: StudyArgs) -> Result<(), CliError> {
    let kind = match args.kind {
        StudyKindArg::GridConvergence => StudyKind::GridConvergence,
        StudyKindArg::LambdaConvergence => StudyKind::LambdaConvergence,
        StudyKindArg::DtConservation => StudyKind::DtConservation,
        StudyKindArg::FroudeSweep => StudyKind::FroudeSweep,
        StudyKindArg::ErrorGrowth => StudyKind::ErrorGrowth,
    };
    let file = load_file(args.common.config.as_deref())?;
    let over = args.common.overrides();
    let study = build_study_config(kind, file, over, &args, env_output_dir())?;
    let outcome = study::run_study(&study)?;
    println!(
        "study {} finished: {} rows ({} failed) in {:.3} s",
        kind.name(),
        outcome.rows,
        outcome.failures,
        outcome.wall.as_secs_f64()
    );
    println!("  wrote {}", outcome.path.display());
    Ok(())
}

/// Resolves the study setup: kind-specific defaults fill any field the user
/// left unset, then the usual flag > file > default precedence applies.
fn build_study_config(
    kind: StudyKind,
    file: FileConfig,
    mut over: Overrides,
    args: &StudyArgs,
    env_dir: Option<PathBuf>,
) -> Result<StudyConfig, CliError> {
    apply_study_defaults(kind, &file, &mut over);
    let base = RunConfig::builder()
        .with_file(file.clone())
        .with_overrides(over)
        .with_env_output_dir(env_dir)
        .build()?;

    let sizes = args
        .sizes
        .clone()
        .or(file.study.sizes.clone())
        .unwrap_or_else(|| vec![64, 128, 256, 512, 1024]);
    let lambdas = args
        .lambdas
        .clone()
        .or(file.study.lambdas.clone())
        .unwrap_or_else(|| vec![1e2, 1e3, 1e4, 1e5]);
    let dts = args.dts.clone().or(file.study.dts.clone()).unwrap_or_else(|| {
        match base.model {
            // The stiff relaxation terms need smaller steps.
            ModelChoice::SgnHyperbolic => vec![0.01, 0.005, 0.002, 0.001, 0.0005],
            _ => vec![0.15, 0.05, 0.02, 0.01, 0.005],
        }
    });
    let epsilons = args
        .epsilons
        .clone()
        .or(file.study.epsilons.clone())
        .unwrap_or_else(|| vec![0.1, 0.15, 0.2, 0.25, 0.3]);
    let transits = args.transits.or(file.study.transits).unwrap_or(20);

    Ok(StudyConfig {
        kind,
        base,
        sizes,
        lambdas,
        dts,
        epsilons,
        transits,
    })
}

/// Fills study-appropriate run defaults into `over` for every field the user
/// set neither on the command line nor in the config file.
fn apply_study_defaults(kind: StudyKind, file: &FileConfig, over: &mut Overrides) {
    let default = |slot: &mut Option<String>, from_file: &Option<String>, value: &str| {
        if slot.is_none() && from_file.is_none() {
            *slot = Some(value.to_string());
        }
    };
    match kind {
        StudyKind::GridConvergence => {
            default(&mut over.scenario, &file.run.scenario, "soliton");
            if over.tol.is_none() && file.time.abs_tol.is_none() && file.time.rel_tol.is_none() {
                over.tol = Some(1e-8);
            }
        }
        StudyKind::LambdaConvergence => {
            default(&mut over.scenario, &file.run.scenario, "soliton");
            default(&mut over.model, &file.run.model, "sgn-hyperbolic");
            if over.order.is_none() && file.run.order.is_none() {
                over.order = Some(6);
            }
            if over.n.is_none() && file.run.n.is_none() {
                over.n = Some(500);
            }
            if over.tol.is_none() && file.time.abs_tol.is_none() && file.time.rel_tol.is_none() {
                over.tol = Some(1e-7);
            }
        }
        StudyKind::DtConservation => {
            default(&mut over.scenario, &file.run.scenario, "gaussian-flat");
            default(&mut over.method, &file.time.method, "dp54");
            if over.order.is_none() && file.run.order.is_none() {
                over.order = Some(2);
            }
        }
        StudyKind::FroudeSweep => {
            default(&mut over.scenario, &file.run.scenario, "favre");
            if over.order.is_none() && file.run.order.is_none() {
                over.order = Some(4);
            }
        }
        StudyKind::ErrorGrowth => {
            default(&mut over.scenario, &file.run.scenario, "soliton");
            if over.order.is_none() && file.run.order.is_none() {
                over.order = Some(6);
            }
            if over.n.is_none() && file.run.n.is_none() {
                over.n = Some(128);
            }
        }
    }
}

/// Verifies the defining identities of every shipped operator on one grid.
fn cmd_check_operators(args: &CheckOperatorsArgs) -> Result<(), CliError> {
    const SKEW_TOL: f64 = 1e-13;
    const CONSISTENCY_TOL: f64 = 1e-13;
    const DISSIPATIVITY_TOL: f64 = 1e-12;

    let grid = PeriodicGrid::new(0.0, 1.0, args.n)?;
    let mass = MassMatrix::new(&grid);
    println!("operator identities on n = {} nodes:", args.n);
    println!(
        "  {:<8} {:>5}  {:>13}  {:>13}  {:>13}  status",
        "family", "order", "antisymmetry", "consistency", "dissipativity"
    );

    let mut failures = 0;
    let mut report = |family: &str, order: usize, r: SbpResiduals| {
        let ok = r.antisymmetry <= SKEW_TOL
            && r.consistency <= CONSISTENCY_TOL
            && r.dissipativity.is_none_or(|v| v <= DISSIPATIVITY_TOL);
        if !ok {
            failures += 1;
        }
        let dissipativity = match r.dissipativity {
            Some(v) => format!("{v:13.3e}"),
            None => format!("{:>13}", "-"),
        };
        println!(
            "  {:<8} {:>5}  {:13.3e}  {:13.3e}  {}  {}",
            family,
            order,
            r.antisymmetry,
            r.consistency,
            dissipativity,
            if ok { "pass" } else { "FAIL" }
        );
    };

    for &order in CENTRAL_ORDERS {
        let d = sgn_core::sbp::build_central(&grid, order)?;
        report("central", order, sbp_residuals_central(&d, &mass));
    }
    for &order in UPWIND_ORDERS {
        let pair = build_upwind_pair(&grid, order)?;
        report("upwind", order, sbp_residuals_pair(&pair, &mass));
    }

    if failures > 0 {
        Err(CliError::OperatorCheck { failures })
    } else {
        println!("all operator identities hold");
        Ok(())
    }
}

fn cmd_list_scenarios() {
    use sgn_core::scenarios::Scenario;
    let describe = |name: &str| match name {
        "soliton" => "exact solitary wave crossing a periodic flat-bottom domain",
        "gaussian-flat" => "Gaussian surface hump over a flat bottom",
        "gaussian-variable" => "Gaussian surface hump over a cosine bed",
        "lake-at-rest" => "still water over a cosine bed (well-balancedness)",
        "manufactured" => "smooth forced solution of the hyperbolic model",
        "riemann" => "smoothed dam break producing a dispersive shock",
        "fission" => "broad hump splitting into a train of solitary waves",
        "favre" => "undular bore generated by a smoothed height jump",
        "dingemans" => "waves passing a submerged trapezoidal bar, with gauges",
        _ => "",
    };
    println!("available scenarios:");
    for name in Scenario::NAMES {
        let sc = Scenario::from_name(name).expect("listed scenario must resolve");
        let (a, b) = sc.default_domain();
        println!("  {name:<18} {}", describe(name));
        println!(
            "  {:<18} domain [{a}, {b}], t_end {:.6}, n {}, {} bottom",
            "",
            sc.default_t_end(),
            sc.default_n(),
            if sc.is_flat() { "flat" } else { "variable" }
        );
    }
}
