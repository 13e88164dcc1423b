//! Command-line interface: argument parsing and mapping onto configuration
//! overrides. Flags beat the `SGN_OUTPUT_DIR` environment variable, which
//! beats the TOML config file, which beats the built-in defaults.

use crate::config::Overrides;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

/// Structure-preserving solvers for the Serre-Green-Naghdi equations.
#[derive(Debug, Parser)]
#[command(name = "sgn", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and write invariants, gauges, and snapshots.
    Run(RunArgs),
    /// Run a parameter study and write its table.
    Study(StudyArgs),
    /// Verify the summation-by-parts identities of all shipped operators.
    CheckOperators(CheckOperatorsArgs),
    /// List the available scenarios with their default setups.
    ListScenarios,
}

/// Flags shared by `run` and `study`; every flag overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML configuration file.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Scenario name (see `sgn list-scenarios`).
    #[arg(long)]
    pub scenario: Option<String>,

    /// Governing system: swe, sgn-hyperbolic, or sgn-original.
    #[arg(long)]
    pub model: Option<String>,

    /// Bathymetry treatment: flat, variable, mild, or full.
    #[arg(long)]
    pub variant: Option<String>,

    /// Operator family: central or upwind.
    #[arg(long)]
    pub operator: Option<String>,

    /// Interior accuracy order (central: 2/4/6, upwind: 1-6).
    #[arg(long)]
    pub order: Option<usize>,

    /// Number of grid nodes.
    #[arg(long, short = 'n')]
    pub n: Option<usize>,

    /// Domain bounds as `xmin,xmax`.
    #[arg(long, value_parser = parse_domain, value_name = "XMIN,XMAX", allow_hyphen_values = true)]
    pub domain: Option<(f64, f64)>,

    /// Relaxation stiffness of the hyperbolic approximation.
    #[arg(long)]
    pub lambda: Option<f64>,

    /// Gravitational acceleration.
    #[arg(long)]
    pub gravity: Option<f64>,

    /// End time of the simulation.
    #[arg(long, value_name = "T")]
    pub t_end: Option<f64>,

    /// Time integration method: dp54 or bs32.
    #[arg(long)]
    pub method: Option<String>,

    /// Fixed time step; omitting it selects adaptive stepping.
    #[arg(long)]
    pub dt: Option<f64>,

    /// Absolute and relative tolerance of the adaptive controller.
    #[arg(long)]
    pub tol: Option<f64>,

    /// Preserve the discrete energy via relaxation.
    #[arg(long, overrides_with = "no_relaxation")]
    pub relaxation: bool,

    /// Disable relaxation (overrides the config file).
    #[arg(long, overrides_with = "relaxation")]
    pub no_relaxation: bool,

    /// Enable artificial viscosity.
    #[arg(long, overrides_with = "no_artificial_viscosity")]
    pub artificial_viscosity: bool,

    /// Disable artificial viscosity (overrides the config file).
    #[arg(long, overrides_with = "artificial_viscosity")]
    pub no_artificial_viscosity: bool,

    /// Artificial viscosity strength multiplier.
    #[arg(long, value_name = "C")]
    pub av_strength: Option<f64>,

    /// Output directory for CSV files.
    #[arg(long, short = 'o', value_name = "DIR")]
    pub output_dir: Option<PathBuf>,

    /// File name prefix for outputs.
    #[arg(long)]
    pub prefix: Option<String>,

    /// Bore strength of the favre scenario (relative height jump).
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Smoothing width of the riemann and favre initial profiles.
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Reproducibility tag recorded with the outputs.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Gauge positions recording the free surface, as `x1,x2,...`.
    #[arg(long, value_delimiter = ',', value_name = "X1,X2,...", allow_hyphen_values = true)]
    pub gauges: Option<Vec<f64>>,

    /// Times at which to write state snapshots, as `t1,t2,...`.
    #[arg(long, value_delimiter = ',', value_name = "T1,T2,...")]
    pub snapshot_times: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    /// Study kind.
    #[arg(value_enum)]
    pub kind: StudyKindArg,

    #[command(flatten)]
    pub common: CommonArgs,

    /// Grid sizes for grid-convergence.
    #[arg(long, value_delimiter = ',', value_name = "N1,N2,...")]
    pub sizes: Option<Vec<usize>>,

    /// Lambda values for lambda-convergence.
    #[arg(long, value_delimiter = ',', value_name = "L1,L2,...")]
    pub lambdas: Option<Vec<f64>>,

    /// Fixed step sizes for dt-conservation.
    #[arg(long, value_delimiter = ',', value_name = "DT1,DT2,...")]
    pub dts: Option<Vec<f64>>,

    /// Bore strengths for froude-sweep.
    #[arg(long, value_delimiter = ',', value_name = "E1,E2,...")]
    pub epsilons: Option<Vec<f64>>,

    /// Domain transits for error-growth.
    #[arg(long)]
    pub transits: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StudyKindArg {
    GridConvergence,
    LambdaConvergence,
    DtConservation,
    FroudeSweep,
    ErrorGrowth,
}

#[derive(Debug, Args)]
pub struct CheckOperatorsArgs {
    /// Grid size used for the dense identity checks.
    #[arg(long, short = 'n', default_value_t = 64)]
    pub n: usize,
}

fn parse_domain(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b] = parts.as_slice() else {
        return Err(format!("expected `xmin,xmax`, got '{s}'"));
    };
    let a: f64 = a.trim().parse().map_err(|_| format!("invalid number '{a}'"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("invalid number '{b}'"))?;
    Ok((a, b))
}

impl CommonArgs {
    /// Collects the explicitly given flags as configuration overrides.
    pub fn overrides(&self) -> Overrides {
        Overrides {
            scenario: self.scenario.clone(),
            model: self.model.clone(),
            variant: self.variant.clone(),
            operator: self.operator.clone(),
            order: self.order,
            n: self.n,
            domain: self.domain,
            lambda: self.lambda,
            gravity: self.gravity,
            t_end: self.t_end,
            method: self.method.clone(),
            dt: self.dt,
            tol: self.tol,
            relaxation: flag_pair(self.relaxation, self.no_relaxation),
            artificial_viscosity: flag_pair(
                self.artificial_viscosity,
                self.no_artificial_viscosity,
            ),
            av_strength: self.av_strength,
            output_dir: self.output_dir.clone(),
            prefix: self.prefix.clone(),
            gauges: None,
            snapshot_times: None,
            epsilon: self.epsilon,
            alpha: self.alpha,
            seed: self.seed,
        }
    }
}

/// Maps an on/off flag pair to an override: `None` when neither was given.
fn flag_pair(on: bool, off: bool) -> Option<bool> {
    match (on, off) {
        (true, _) => Some(true),
        (_, true) => Some(false),
        (false, false) => None,
    }
}
