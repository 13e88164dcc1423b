//! Turns a resolved configuration into a semidiscrete model and initial state.

use crate::config::{ModelChoice, OperatorChoice, RunConfig, VariantChoice};
use crate::CliError;
use ndarray::Array1;
use sgn_core::models::hyperbolic::HyperbolicModel;
use sgn_core::models::original::OriginalModel;
use sgn_core::models::swe::SweModel;
use sgn_core::models::{pack, BathymetryVariant, Semidiscretization};
use sgn_core::scenarios::Scenario;
use sgn_core::{OperatorSet, PeriodicGrid};

/// A ready-to-integrate model with its initial state and scenario.
pub struct BuiltModel {
    pub model: Box<dyn Semidiscretization>,
    pub y0: Array1<f64>,
    pub grid: PeriodicGrid,
    pub scenario: Scenario,
}

/// Builds grid, operators, model, and initial state from the configuration.
pub fn build(cfg: &RunConfig) -> Result<BuiltModel, CliError> {
    let scenario = cfg.scenario_object()?;
    let grid = PeriodicGrid::new(cfg.domain.0, cfg.domain.1, cfg.n)?;
    let ops = match cfg.operator {
        OperatorChoice::Central => OperatorSet::central(grid.clone(), cfg.order)?,
        OperatorChoice::Upwind => OperatorSet::upwind(grid.clone(), cfg.order)?,
    };

    let b = scenario.bathymetry(&grid);
    let (h0, u0) = scenario.initial_height_velocity(&grid);

    let (model, y0): (Box<dyn Semidiscretization>, Array1<f64>) = match cfg.model {
        ModelChoice::Swe => {
            let mut model = SweModel::new(ops, cfg.gravity, b)?;
            if let Some(c) = cfg.artificial_viscosity {
                model = model.with_artificial_viscosity(c);
            }
            let y0 = pack(&[&h0, &u0]);
            (Box::new(model), y0)
        }
        ModelChoice::SgnHyperbolic => {
            let mut model = match cfg.variant {
                VariantChoice::Flat => HyperbolicModel::flat(ops, cfg.gravity, cfg.lambda),
                _ => HyperbolicModel::variable(ops, cfg.gravity, cfg.lambda, b)?,
            };
            if let Some(c) = cfg.artificial_viscosity {
                model = model.with_artificial_viscosity(c);
            }
            if let Some(sources) = scenario.hyperbolic_sources() {
                model = model.with_sources(sources);
            }
            // The manufactured fields prescribe their own auxiliary variables;
            // every other scenario starts on the equilibrium manifold.
            let (w0, eta0) = match &scenario {
                Scenario::Manufactured(m) => (
                    grid.sample(|x| m.vertical(x, 0.0)),
                    grid.sample(|x| m.elevation(x, 0.0)),
                ),
                _ => model.init_auxiliary(&h0, &u0),
            };
            let y0 = pack(&[&h0, &u0, &w0, &eta0]);
            (Box::new(model), y0)
        }
        ModelChoice::SgnOriginal => {
            let variant = match cfg.variant {
                VariantChoice::Flat => BathymetryVariant::Flat,
                VariantChoice::Mild => BathymetryVariant::MildSlope,
                VariantChoice::Full => BathymetryVariant::FullSystem,
                // Rejected by validation; unreachable through the CLI.
                VariantChoice::Variable => BathymetryVariant::MildSlope,
            };
            let mut model = OriginalModel::new(ops, cfg.gravity, b, variant)?;
            if let Some(c) = cfg.artificial_viscosity {
                model = model.with_artificial_viscosity(c);
            }
            let y0 = pack(&[&h0, &u0]);
            (Box::new(model), y0)
        }
    };

    Ok(BuiltModel { model, y0, grid, scenario })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Overrides;

    fn build_with(over: Overrides) -> BuiltModel {
        let cfg = RunConfig::builder().with_overrides(over).build().unwrap();
        build(&cfg).unwrap()
    }

    #[test]
    fn soliton_default_is_two_field_original() {
        let built = build_with(Overrides::default());
        assert_eq!(built.model.n_fields(), 2);
        assert_eq!(built.y0.len(), 2 * 512);
        assert_eq!(built.model.field_names(), ["h", "u"]);
    }

    #[test]
    fn hyperbolic_state_has_consistent_auxiliary_fields() {
        let over = Overrides {
            model: Some("sgn-hyperbolic".into()),
            n: Some(64),
            ..Default::default()
        };
        let built = build_with(over);
        assert_eq!(built.model.n_fields(), 4);
        let n = built.model.n_nodes();
        // eta starts equal to h on the equilibrium manifold.
        for i in 0..n {
            assert_eq!(built.y0[i], built.y0[3 * n + i]);
        }
    }

    #[test]
    fn initial_rhs_vanishes_for_the_lake_at_rest() {
        let over = Overrides {
            scenario: Some("lake-at-rest".into()),
            n: Some(200),
            ..Default::default()
        };
        let built = build_with(over);
        let mut dy = Array1::zeros(built.y0.len());
        built.model.rhs(0.0, &built.y0, &mut dy).unwrap();
        let norm = dy.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(norm < 1e-13, "lake at rest is not stationary: {norm:e}");
    }
}
