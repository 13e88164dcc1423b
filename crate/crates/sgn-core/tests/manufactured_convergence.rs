//! Design-order convergence of the hyperbolic SGN model against the
//! manufactured solution with closed-form forcing, exercising the variable
//! bathymetry terms, the source hook, and the fixed-step integrator together.

use sgn_core::diagnostics::{eoc, l2_error};
use sgn_core::models::hyperbolic::HyperbolicModel;
use sgn_core::models::{pack, Semidiscretization};
use sgn_core::scenarios::ManufacturedSolution;
use sgn_core::time::{integrate, ButcherTableau, IntegrateOptions};
use sgn_core::{OperatorSet, PeriodicGrid, GRAVITY};
use std::sync::Arc;

const LAMBDA: f64 = 100.0;

fn run_error(n: usize, upwind_order: Option<usize>) -> (f64, f64) {
    let grid = PeriodicGrid::new(0.0, 1.0, n).unwrap();
    let ops = match upwind_order {
        Some(p) => OperatorSet::upwind(grid, p).unwrap(),
        None => OperatorSet::central(grid, 2).unwrap(),
    };
    let m = ManufacturedSolution::default();
    let b = ops.grid().sample(|x| m.bathymetry(x));
    let model = HyperbolicModel::variable(ops, GRAVITY, LAMBDA, b)
        .unwrap()
        .with_sources(Arc::new(m));

    let grid = model.ops().grid();
    let h0 = grid.sample(|x| m.height(x, 0.0));
    let u0 = grid.sample(|x| m.velocity(x, 0.0));
    let w0 = grid.sample(|x| m.vertical(x, 0.0));
    let eta0 = grid.sample(|x| m.elevation(x, 0.0));
    let y0 = pack(&[&h0, &u0, &w0, &eta0]);

    // Wave speeds stay below sqrt(g h_max + 3 lambda) + |u| ~ 21.
    let dt = grid.dx() / 60.0;
    let tab = ButcherTableau::dormand_prince_54();
    let sol = integrate(&model, &y0, 0.0, 1.0, &tab, &IntegrateOptions::fixed(dt), |_, _| {})
        .unwrap();

    let h_exact = grid.sample(|x| m.height(x, 1.0));
    let u_exact = grid.sample(|x| m.velocity(x, 1.0));
    let nn = grid.n();
    let h_num = sgn_core::models::field(&sol.y, 0, nn).to_owned();
    let u_num = sgn_core::models::field(&sol.y, 1, nn).to_owned();
    let mass = model.ops().mass();
    (
        l2_error(&h_num, &h_exact, mass).unwrap(),
        l2_error(&u_num, &u_exact, mass).unwrap(),
    )
}

fn check_orders(upwind_order: Option<usize>, expected: f64, slack: (f64, f64)) {
    let sizes = [48usize, 72, 108];
    let mut errs_h = Vec::new();
    let mut errs_u = Vec::new();
    for &n in &sizes {
        let (eh, eu) = run_error(n, upwind_order);
        assert!(eh.is_finite() && eu.is_finite());
        errs_h.push(eh);
        errs_u.push(eu);
    }
    let sizes_f: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    for (label, errs) in [("h", errs_h), ("u", errs_u)] {
        let rates = eoc(&errs, &sizes_f).unwrap();
        for r in &rates {
            assert!(
                *r >= expected - slack.0 && *r <= expected + slack.1,
                "{label}: rates {rates:?} not near {expected} (errors {errs:?})"
            );
        }
    }
}

#[test]
fn central_order_two_converges_at_design_order() {
    check_orders(None, 2.0, (0.5, 1.0));
}

#[test]
fn upwind_order_three_converges_at_design_order() {
    check_orders(Some(3), 3.0, (0.5, 1.2));
}

/// With exact initial data the manufactured forcing keeps the semidiscrete
/// residual at truncation size, so a very short run cannot drift far.
#[test]
fn short_run_stays_on_the_manufactured_orbit() {
    let (eh, eu) = {
        let grid = PeriodicGrid::new(0.0, 1.0, 48).unwrap();
        let ops = OperatorSet::central(grid, 2).unwrap();
        let m = ManufacturedSolution::default();
        let b = ops.grid().sample(|x| m.bathymetry(x));
        let model = HyperbolicModel::variable(ops, GRAVITY, LAMBDA, b)
            .unwrap()
            .with_sources(Arc::new(m));
        let grid = model.ops().grid();
        let y0 = pack(&[
            &grid.sample(|x| m.height(x, 0.0)),
            &grid.sample(|x| m.velocity(x, 0.0)),
            &grid.sample(|x| m.vertical(x, 0.0)),
            &grid.sample(|x| m.elevation(x, 0.0)),
        ]);
        let tab = ButcherTableau::bogacki_shampine_32();
        let t_end = 0.05;
        let sol = integrate(
            &model,
            &y0,
            0.0,
            t_end,
            &tab,
            &IntegrateOptions::fixed(1e-4),
            |_, _| {},
        )
        .unwrap();
        let nn = grid.n();
        let mass = model.ops().mass();
        (
            l2_error(
                &sgn_core::models::field(&sol.y, 0, nn).to_owned(),
                &grid.sample(|x| m.height(x, t_end)),
                mass,
            )
            .unwrap(),
            l2_error(
                &sgn_core::models::field(&sol.y, 1, nn).to_owned(),
                &grid.sample(|x| m.velocity(x, t_end)),
                mass,
            )
            .unwrap(),
        )
    };
    assert!(eh <= 5e-3, "h error {eh}");
    assert!(eu <= 5e-3, "u error {eu}");
}
