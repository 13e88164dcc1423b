//! Run configuration: TOML file schema, flag/environment merging, and
//! validation of model/variant/operator combinations.
//!
//! Precedence, highest first: command-line flag, `SGN_OUTPUT_DIR` environment
//! variable (output directory only), configuration file, built-in default.

use serde::{Deserialize, Serialize};
use sgn_core::scenarios::Scenario;
use std::fmt;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Configuration problems; these exit with status 1.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse config file {path}: {source}")]
    Parse {
        path: PathBuf,
        source: Box<toml::de::Error>,
    },
    #[error("unknown scenario '{got}'; valid names: {}", Scenario::NAMES.join(", "))]
    UnknownScenario { got: String },
    #[error("unknown {what} '{got}'; valid values: {valid}")]
    UnknownValue {
        what: &'static str,
        got: String,
        valid: &'static str,
    },
    #[error("{0}")]
    Invalid(String),
}

/// Governing system to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelChoice {
    /// Shallow water equations (non-dispersive baseline).
    Swe,
    /// Hyperbolic approximation of the SGN equations.
    SgnHyperbolic,
    /// Classical SGN equations with the elliptic step.
    SgnOriginal,
}

impl ModelChoice {
    pub const VALID: &'static str = "swe, sgn-hyperbolic, sgn-original";

    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "swe" => Ok(Self::Swe),
            "sgn-hyperbolic" => Ok(Self::SgnHyperbolic),
            "sgn-original" => Ok(Self::SgnOriginal),
            _ => Err(ConfigError::UnknownValue {
                what: "model",
                got: s.into(),
                valid: Self::VALID,
            }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Swe => "swe",
            Self::SgnHyperbolic => "sgn-hyperbolic",
            Self::SgnOriginal => "sgn-original",
        }
    }
}

impl fmt::Display for ModelChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bathymetry treatment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantChoice {
    /// Flat bottom.
    Flat,
    /// Variable bottom (SWE and hyperbolic models).
    Variable,
    /// Variable bottom, mild-slope dispersive terms (classical SGN only).
    Mild,
    /// Variable bottom, full dispersive terms (classical SGN only).
    Full,
}

impl VariantChoice {
    pub const VALID: &'static str = "flat, variable, mild, full";

    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "flat" => Ok(Self::Flat),
            "variable" => Ok(Self::Variable),
            "mild" => Ok(Self::Mild),
            "full" => Ok(Self::Full),
            _ => Err(ConfigError::UnknownValue {
                what: "variant",
                got: s.into(),
                valid: Self::VALID,
            }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Flat => "flat",
            Self::Variable => "variable",
            Self::Mild => "mild",
            Self::Full => "full",
        }
    }
}

impl fmt::Display for VariantChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Spatial operator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorChoice {
    Central,
    Upwind,
}

impl OperatorChoice {
    pub const VALID: &'static str = "central, upwind";

    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "central" => Ok(Self::Central),
            "upwind" => Ok(Self::Upwind),
            _ => Err(ConfigError::UnknownValue {
                what: "operator",
                got: s.into(),
                valid: Self::VALID,
            }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Central => "central",
            Self::Upwind => "upwind",
        }
    }
}

/// Time integration method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    /// Dormand-Prince 5(4).
    Dp54,
    /// Bogacki-Shampine 3(2).
    Bs32,
}

impl MethodChoice {
    pub const VALID: &'static str = "dp54, bs32";

    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "dp54" => Ok(Self::Dp54),
            "bs32" => Ok(Self::Bs32),
            _ => Err(ConfigError::UnknownValue {
                what: "method",
                got: s.into(),
                valid: Self::VALID,
            }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Dp54 => "dp54",
            Self::Bs32 => "bs32",
        }
    }
}

/// Fully resolved configuration of a single simulation.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub scenario: String,
    pub model: ModelChoice,
    pub variant: VariantChoice,
    pub operator: OperatorChoice,
    pub order: usize,
    pub n: usize,
    pub domain: (f64, f64),
    pub lambda: f64,
    pub gravity: f64,
    pub t_end: f64,
    pub method: MethodChoice,
    /// `Some(dt)` for fixed stepping, `None` for adaptive.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub relaxation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub artificial_viscosity: Option<f64>,
    pub output_dir: PathBuf,
    pub prefix: String,
    pub snapshot_times: Vec<f64>,
    pub gauges: Vec<f64>,
    /// Favre bore strength (relative height jump).
    pub epsilon: f64,
    /// Smoothing sharpness of the Riemann and Favre initial profiles.
    pub alpha: f64,
    /// Reproducibility tag recorded with the run. The solvers are fully
    /// deterministic, so the seed only labels outputs.
    pub seed: u64,
    /// Optional experimental reference data (t, value) or (Fr, a_max).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_data: Option<PathBuf>,
    /// Whether lambda was user-supplied rather than defaulted; decides if
    /// "lambda with a non-hyperbolic model" is flagged as an error.
    #[serde(skip)]
    lambda_set: bool,
}

impl RunConfig {
    /// Scenario object with the configured parameters applied.
    pub fn scenario_object(&self) -> Result<Scenario, ConfigError> {
        let mut sc =
            Scenario::from_name(&self.scenario).ok_or_else(|| ConfigError::UnknownScenario {
                got: self.scenario.clone(),
            })?;
        match &mut sc {
            Scenario::Soliton(p) => p.g = self.gravity,
            Scenario::Manufactured(m) => m.g = self.gravity,
            Scenario::Riemann(p) => {
                p.alpha = self.alpha;
                p.g = self.gravity;
            }
            Scenario::FavreWaves(p) => {
                p.epsilon = self.epsilon;
                p.alpha = self.alpha;
                p.g = self.gravity;
            }
            Scenario::DingemansBar(p) => p.g = self.gravity,
            _ => {}
        }
        Ok(sc)
    }

    /// Checks cross-field constraints; call after merging.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let scenario = self.scenario_object()?;
        let bad = |msg: String| Err(ConfigError::Invalid(msg));

        match (self.model, self.variant) {
            (ModelChoice::Swe, VariantChoice::Mild | VariantChoice::Full) => {
                return bad(format!(
                    "variant '{}' applies to sgn-original only; use 'flat' or 'variable' with swe",
                    self.variant
                ));
            }
            (ModelChoice::SgnHyperbolic, VariantChoice::Mild | VariantChoice::Full) => {
                return bad(format!(
                    "variant '{}' applies to sgn-original only; the hyperbolic model has a single \
                     variable-bathymetry form, use 'variable'",
                    self.variant
                ));
            }
            (ModelChoice::SgnOriginal, VariantChoice::Variable) => {
                return bad(
                    "sgn-original needs an explicit dispersive treatment: use 'mild' or 'full'"
                        .into(),
                );
            }
            _ => {}
        }

        if !scenario.is_flat() && self.variant == VariantChoice::Flat {
            return bad(format!(
                "scenario '{}' has variable bathymetry; pick variant 'variable' (swe, \
                 sgn-hyperbolic) or 'mild'/'full' (sgn-original)",
                self.scenario
            ));
        }
        if matches!(scenario, Scenario::Manufactured(_)) && self.model != ModelChoice::SgnHyperbolic
        {
            return bad("the manufactured scenario has forcing terms for sgn-hyperbolic only".into());
        }

        if self.lambda_explicit() && self.model != ModelChoice::SgnHyperbolic {
            return bad("lambda only applies to sgn-hyperbolic".into());
        }
        if !(self.lambda > 0.0) {
            return bad(format!("lambda must be positive, got {}", self.lambda));
        }
        if !(self.gravity > 0.0) {
            return bad(format!("gravity must be positive, got {}", self.gravity));
        }
        if !(self.t_end > 0.0) {
            return bad(format!("t_end must be positive, got {}", self.t_end));
        }
        if self.n < 4 {
            return bad(format!("n must be at least 4, got {}", self.n));
        }
        if !(self.domain.1 > self.domain.0) {
            return bad(format!(
                "domain must satisfy x_min < x_max, got [{}, {}]",
                self.domain.0, self.domain.1
            ));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return bad(format!("dt must be positive, got {dt}"));
            }
        }
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return bad("tolerances must be positive".into());
        }
        if let Some(c) = self.artificial_viscosity {
            if !(c > 0.0) {
                return bad(format!("artificial viscosity strength must be positive, got {c}"));
            }
        }
        match self.operator {
            OperatorChoice::Central => {
                if !matches!(self.order, 2 | 4 | 6) {
                    return bad(format!(
                        "central operators support orders 2, 4, 6; got {}",
                        self.order
                    ));
                }
            }
            OperatorChoice::Upwind => {
                if !(1..=6).contains(&self.order) {
                    return bad(format!(
                        "upwind operators support orders 1 through 6; got {}",
                        self.order
                    ));
                }
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad(format!("epsilon must lie in (0, 1), got {}", self.epsilon));
        }
        if !(self.alpha > 0.0) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        for &g in &self.gauges {
            if g < self.domain.0 || g > self.domain.1 {
                return bad(format!(
                    "gauge at x = {g} lies outside the domain [{}, {}]",
                    self.domain.0, self.domain.1
                ));
            }
        }
        Ok(())
    }

    fn lambda_explicit(&self) -> bool {
        self.lambda_set
    }

    /// Serializes the resolved configuration back to TOML (round-trip aid).
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).unwrap_or_default()
    }
}

impl RunConfig {
    pub fn builder() -> RunConfigBuilder {
        RunConfigBuilder::default()
    }
}

/// File schema: every field optional, sections mirror [`RunConfig`].
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub time: TimeSection,
    #[serde(default)]
    pub stabilization: StabilizationSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub study: StudySection,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub scenario: Option<String>,
    pub model: Option<String>,
    pub variant: Option<String>,
    pub operator: Option<String>,
    pub order: Option<usize>,
    pub n: Option<usize>,
    pub domain: Option<[f64; 2]>,
    pub lambda: Option<f64>,
    pub gravity: Option<f64>,
    pub t_end: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub method: Option<String>,
    pub dt: Option<f64>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub relaxation: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StabilizationSection {
    pub artificial_viscosity: Option<bool>,
    pub strength: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub prefix: Option<String>,
    pub snapshot_times: Option<Vec<f64>>,
    pub gauges: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    pub reference_data: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StudySection {
    pub sizes: Option<Vec<usize>>,
    pub lambdas: Option<Vec<f64>>,
    pub dts: Option<Vec<f64>>,
    pub epsilons: Option<Vec<f64>>,
    pub transits: Option<usize>,
}

impl FileConfig {
    /// Reads and parses a TOML config file.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source: Box::new(source),
        })
    }
}

/// Flag-level overrides collected by the CLI layer; `None` means "not given".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub scenario: Option<String>,
    pub model: Option<String>,
    pub variant: Option<String>,
    pub operator: Option<String>,
    pub order: Option<usize>,
    pub n: Option<usize>,
    pub domain: Option<(f64, f64)>,
    pub lambda: Option<f64>,
    pub gravity: Option<f64>,
    pub t_end: Option<f64>,
    pub method: Option<String>,
    pub dt: Option<f64>,
    pub tol: Option<f64>,
    pub relaxation: Option<bool>,
    pub artificial_viscosity: Option<bool>,
    pub av_strength: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub prefix: Option<String>,
    pub gauges: Option<Vec<f64>>,
    pub snapshot_times: Option<Vec<f64>>,
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    pub seed: Option<u64>,
}

/// Builder that applies precedence and fills scenario-dependent defaults.
#[derive(Debug, Clone, Default)]
pub struct RunConfigBuilder {
    file: FileConfig,
    over: Overrides,
    env_output_dir: Option<PathBuf>,
}

impl RunConfigBuilder {
    pub fn with_file(mut self, file: FileConfig) -> Self {
        self.file = file;
        self
    }

    pub fn with_overrides(mut self, over: Overrides) -> Self {
        self.over = over;
        self
    }

    /// Supplies the `SGN_OUTPUT_DIR` value; passed in for testability.
    pub fn with_env_output_dir(mut self, dir: Option<PathBuf>) -> Self {
        self.env_output_dir = dir;
        self
    }

    pub fn build(self) -> Result<RunConfig, ConfigError> {
        let Self { file, over, env_output_dir } = self;

        let scenario_name = over
            .scenario
            .or(file.run.scenario)
            .unwrap_or_else(|| "soliton".to_string());
        let scenario =
            Scenario::from_name(&scenario_name).ok_or_else(|| ConfigError::UnknownScenario {
                got: scenario_name.clone(),
            })?;

        let model = match over.model.or(file.run.model) {
            Some(s) => ModelChoice::parse(&s)?,
            None => ModelChoice::SgnOriginal,
        };
        let variant = match over.variant.or(file.run.variant) {
            Some(s) => VariantChoice::parse(&s)?,
            None => default_variant(model, scenario.is_flat()),
        };
        let operator = match over.operator.or(file.run.operator) {
            Some(s) => OperatorChoice::parse(&s)?,
            None => OperatorChoice::Central,
        };
        let method = match over.method.or(file.time.method) {
            Some(s) => MethodChoice::parse(&s)?,
            None => match model {
                ModelChoice::SgnHyperbolic => MethodChoice::Bs32,
                _ => MethodChoice::Dp54,
            },
        };

        let lambda_set = over.lambda.is_some() || file.run.lambda.is_some();
        let domain = over
            .domain
            .or(file.run.domain.map(|[a, b]| (a, b)))
            .unwrap_or_else(|| scenario.default_domain());
        let (abs_tol, rel_tol) = match over.tol {
            Some(tol) => (tol, tol),
            None => (
                file.time.abs_tol.unwrap_or(1e-5),
                file.time.rel_tol.unwrap_or(1e-5),
            ),
        };
        let av_on = over
            .artificial_viscosity
            .or(file.stabilization.artificial_viscosity)
            .unwrap_or(false);
        let av_strength = over.av_strength.or(file.stabilization.strength).unwrap_or(1.0);

        let config = RunConfig {
            scenario: scenario_name,
            model,
            variant,
            operator,
            order: over.order.or(file.run.order).unwrap_or(4),
            n: over.n.or(file.run.n).unwrap_or_else(|| scenario.default_n()),
            domain,
            lambda: over.lambda.or(file.run.lambda).unwrap_or(500.0),
            gravity: over.gravity.or(file.run.gravity).unwrap_or(sgn_core::GRAVITY),
            t_end: over
                .t_end
                .or(file.run.t_end)
                .unwrap_or_else(|| scenario.default_t_end()),
            method,
            dt: over.dt.or(file.time.dt),
            abs_tol,
            rel_tol,
            relaxation: over.relaxation.or(file.time.relaxation).unwrap_or(false),
            artificial_viscosity: av_on.then_some(av_strength),
            output_dir: over
                .output_dir
                .or(env_output_dir)
                .or(file.output.dir)
                .unwrap_or_else(|| PathBuf::from(".")),
            prefix: over
                .prefix
                .or(file.output.prefix)
                .unwrap_or_else(|| "sgn".to_string()),
            snapshot_times: over
                .snapshot_times
                .or(file.output.snapshot_times)
                .unwrap_or_default(),
            gauges: over.gauges.or(file.output.gauges).unwrap_or_default(),
            epsilon: over.epsilon.or(file.scenario.epsilon).unwrap_or(0.2),
            alpha: over.alpha.or(file.scenario.alpha).unwrap_or(2.0),
            seed: over.seed.or(file.run.seed).unwrap_or(0),
            reference_data: file.scenario.reference_data,
            lambda_set,
        };
        config.validate()?;
        Ok(config)
    }
}

fn default_variant(model: ModelChoice, flat: bool) -> VariantChoice {
    if flat {
        VariantChoice::Flat
    } else {
        match model {
            ModelChoice::SgnOriginal => VariantChoice::Mild,
            _ => VariantChoice::Variable,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> RunConfigBuilder {
        RunConfig::builder()
    }

    #[test]
    fn defaults_follow_the_scenario() {
        let cfg = base().build().unwrap();
        assert_eq!(cfg.scenario, "soliton");
        assert_eq!(cfg.model, ModelChoice::SgnOriginal);
        assert_eq!(cfg.variant, VariantChoice::Flat);
        assert_eq!(cfg.n, 512);
        assert_eq!(cfg.domain, (-50.0, 50.0));
        assert_eq!(cfg.gravity, 9.81);
        assert_eq!(cfg.lambda, 500.0);
        assert_eq!(cfg.method, MethodChoice::Dp54);
        assert!((cfg.t_end - 29.145725699277874).abs() < 1e-10);
    }

    #[test]
    fn variable_scenario_defaults_to_mild_for_original() {
        let over = Overrides {
            scenario: Some("gaussian-variable".into()),
            ..Default::default()
        };
        let cfg = base().with_overrides(over).build().unwrap();
        assert_eq!(cfg.variant, VariantChoice::Mild);
        assert_eq!(cfg.t_end, 35.0);
        assert_eq!(cfg.n, 1000);
    }

    #[test]
    fn hyperbolic_defaults_to_bs32_and_variable() {
        let over = Overrides {
            scenario: Some("gaussian-variable".into()),
            model: Some("sgn-hyperbolic".into()),
            ..Default::default()
        };
        let cfg = base().with_overrides(over).build().unwrap();
        assert_eq!(cfg.method, MethodChoice::Bs32);
        assert_eq!(cfg.variant, VariantChoice::Variable);
    }

    #[test]
    fn rejects_bad_combinations() {
        let cases = [
            ("swe", "mild", "soliton"),
            ("sgn-hyperbolic", "full", "soliton"),
            ("sgn-original", "variable", "gaussian-variable"),
        ];
        for (model, variant, scenario) in cases {
            let over = Overrides {
                scenario: Some(scenario.into()),
                model: Some(model.into()),
                variant: Some(variant.into()),
                ..Default::default()
            };
            assert!(base().with_overrides(over).build().is_err(), "{model}/{variant}");
        }
    }

    #[test]
    fn rejects_lambda_outside_hyperbolic() {
        let over = Overrides {
            lambda: Some(700.0),
            ..Default::default()
        };
        let err = base().with_overrides(over).build().unwrap_err();
        assert!(err.to_string().contains("lambda"));
    }

    #[test]
    fn rejects_flat_variant_on_uneven_bottom() {
        let over = Overrides {
            scenario: Some("dingemans".into()),
            variant: Some("flat".into()),
            ..Default::default()
        };
        assert!(base().with_overrides(over).build().is_err());
    }

    #[test]
    fn unknown_scenario_lists_valid_names() {
        let over = Overrides {
            scenario: Some("tsunami".into()),
            ..Default::default()
        };
        let err = base().with_overrides(over).build().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("tsunami"));
        for name in Scenario::NAMES {
            assert!(msg.contains(name), "missing {name} in {msg}");
        }
    }

    #[test]
    fn precedence_flag_env_file_default() {
        let file: FileConfig = toml::from_str(
            r#"
            [run]
            scenario = "gaussian-flat"
            n = 100
            [output]
            dir = "from-file"
            "#,
        )
        .unwrap();
        // File beats default.
        let cfg = base().with_file(file.clone()).build().unwrap();
        assert_eq!(cfg.n, 100);
        assert_eq!(cfg.output_dir, PathBuf::from("from-file"));
        // Env beats file for the output dir.
        let cfg = base()
            .with_file(file.clone())
            .with_env_output_dir(Some(PathBuf::from("from-env")))
            .build()
            .unwrap();
        assert_eq!(cfg.output_dir, PathBuf::from("from-env"));
        // Flag beats both.
        let over = Overrides {
            n: Some(64),
            output_dir: Some(PathBuf::from("from-flag")),
            ..Default::default()
        };
        let cfg = base()
            .with_file(file)
            .with_env_output_dir(Some(PathBuf::from("from-env")))
            .with_overrides(over)
            .build()
            .unwrap();
        assert_eq!(cfg.n, 64);
        assert_eq!(cfg.output_dir, PathBuf::from("from-flag"));
    }

    #[test]
    fn config_file_rejects_unknown_keys() {
        let r: Result<FileConfig, _> = toml::from_str("[run]\nwavelength = 3.0\n");
        assert!(r.is_err());
    }

    #[test]
    fn toml_round_trip_is_idempotent() {
        let text = r#"
            [run]
            scenario = "riemann"
            order = 2
            [time]
            relaxation = true
        "#;
        let parsed: FileConfig = toml::from_str(text).unwrap();
        let serialized = toml::to_string(&parsed).unwrap();
        let reparsed: FileConfig = toml::from_str(&serialized).unwrap();
        assert_eq!(toml::to_string(&reparsed).unwrap(), serialized);
    }
}
