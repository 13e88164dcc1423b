//! Artificial viscosity for the momentum equation.
//!
//! The continuous regularization adds `(mu h u_x)_x` to the momentum balance.
//! Discretely the term is `F_mu = D (mu h D u)` for central operators and
//! `F_mu = D+ (mu h D- u)` for upwind pairs, which keeps the total momentum
//! exactly (`1^T M F_mu = 0`) and never produces energy (`u^T M F_mu <= 0`).

use crate::sbp::OperatorSet;
use ndarray::Array1;

/// Grid-dependent viscosity `mu = c * dx^p / p` for operator order `p`.
pub fn av_coefficient(dx: f64, order: usize, c: f64) -> f64 {
    c * dx.powi(order as i32) / order as f64
}

/// Dissipative momentum term `D (mu h D u)` (upwind: `D+ (mu h D- u)`).
pub fn av_term(ops: &OperatorSet, mu: f64, h: &Array1<f64>, u: &Array1<f64>) -> Array1<f64> {
    let inner = ops.d_lower().apply(u) * h * mu;
    ops.d_upper().apply(&inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PeriodicGrid;
    use approx::assert_relative_eq;

    #[test]
    fn coefficient_formula() {
        assert_relative_eq!(av_coefficient(0.125, 4, 1.0), 6.103515625e-5);
        assert_relative_eq!(av_coefficient(0.3, 2, 1.0), 0.045);
    }

    #[test]
    fn conserves_momentum_and_dissipates_energy() {
        let grid = PeriodicGrid::new(-3.0, 3.0, 48).unwrap();
        for ops in [
            OperatorSet::central(grid.clone(), 4).unwrap(),
            OperatorSet::upwind(grid.clone(), 3).unwrap(),
        ] {
            let h = ops.grid().sample(|x| 1.0 + 0.4 * (x * 1.1).cos());
            let u = ops.grid().sample(|x| (x * 2.3).sin() + 0.1);
            let mu = av_coefficient(ops.grid().dx(), ops.order(), 1.0);
            let f = av_term(&ops, mu, &h, &u);
            let m = ops.mass();
            let scale = m.norm(&f).max(1.0);
            assert!(m.quadrature(&f).abs() <= 1e-13 * scale);
            assert!(m.inner(&u, &f) <= 1e-13 * scale);
        }
    }

    #[test]
    fn vanishes_for_constant_velocity() {
        let grid = PeriodicGrid::new(0.0, 1.0, 32).unwrap();
        let ops = OperatorSet::central(grid, 2).unwrap();
        let h = ops.grid().sample(|x| 1.0 + 0.2 * (std::f64::consts::TAU * x).sin());
        let u = Array1::from_elem(32, 0.7);
        let f = av_term(&ops, 0.05, &h, &u);
        assert!(f.iter().all(|v| v.abs() <= 1e-14));
    }
}
