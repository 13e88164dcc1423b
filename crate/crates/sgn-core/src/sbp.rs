//! Periodic summation-by-parts (SBP) derivative operators with the diagonal
//! mass matrix `M = dx * I`.
//!
//! Central operators `D` satisfy `M D + D^T M = 0` and `D 1 = 0`; upwind pairs
//! `(D+, D-)` satisfy `M D+ + D-^T M = 0` with `M (D+ - D-)` negative
//! semidefinite, so their average is again a central SBP operator.

use crate::error::SbpError;
use crate::grid::PeriodicGrid;
use ndarray::{Array1, Array2, ArrayView1, ArrayViewMut1};

/// Role of a derivative operator within an SBP family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Central,
    UpwindPlus,
    UpwindMinus,
}

/// Whether a model uses a single central operator or an upwind pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorMode {
    Central,
    Upwind,
}

// Interior stencils in 1/dx units; (leftmost offset, coefficients).
#[rustfmt::skip]
const CENTRAL_STENCILS: &[(usize, isize, &[f64])] = &[
    (2, -1, &[-1.0 / 2.0, 0.0, 1.0 / 2.0]),
    (4, -2, &[1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0]),
    (6, -3, &[-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0]),
];

// Downwind-biased stencils whose reflection gives the minus operator.
#[rustfmt::skip]
const UPWIND_PLUS_STENCILS: &[(usize, isize, &[f64])] = &[
    (1,  0, &[-1.0, 1.0]),
    (2,  0, &[-3.0 / 2.0, 2.0, -1.0 / 2.0]),
    (3, -1, &[-1.0 / 3.0, -1.0 / 2.0, 1.0, -1.0 / 6.0]),
    (4, -1, &[-1.0 / 4.0, -5.0 / 6.0, 3.0 / 2.0, -1.0 / 2.0, 1.0 / 12.0]),
    (5, -2, &[1.0 / 20.0, -1.0 / 2.0, -1.0 / 3.0, 1.0, -1.0 / 4.0, 1.0 / 30.0]),
    (6, -2, &[1.0 / 30.0, -2.0 / 5.0, -7.0 / 12.0, 4.0 / 3.0, -1.0 / 2.0, 2.0 / 15.0, -1.0 / 60.0]),
];

/// Supported central operator orders.
pub const CENTRAL_ORDERS: &[usize] = &[2, 4, 6];
/// Supported upwind pair orders.
pub const UPWIND_ORDERS: &[usize] = &[1, 2, 3, 4, 5, 6];

/// Circulant first-derivative operator applied matrix-free.
#[derive(Debug, Clone)]
pub struct DerivativeOperator {
    n: usize,
    left: isize,
    coeffs: Vec<f64>,
    order: usize,
    kind: OperatorKind,
}

impl DerivativeOperator {
    fn from_stencil(
        grid: &PeriodicGrid,
        left: isize,
        unscaled: &[f64],
        order: usize,
        kind: OperatorKind,
    ) -> Result<Self, SbpError> {
        let n = grid.n();
        let width = unscaled.len();
        if width >= n {
            return Err(SbpError::StencilTooWide { width, n });
        }
        let inv_dx = 1.0 / grid.dx();
        Ok(Self {
            n,
            left,
            coeffs: unscaled.iter().map(|c| c * inv_dx).collect(),
            order,
            kind,
        })
    }

    /// Number of grid nodes the operator acts on.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Interior accuracy order.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Role within the SBP family.
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    /// Stencil as `(offset, coefficient)` pairs; coefficients include `1/dx`.
    pub fn stencil(&self) -> impl Iterator<Item = (isize, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| (self.left + j as isize, c))
    }

    /// Largest node offset reached on either side.
    pub fn reach(&self) -> usize {
        let right = self.left + self.coeffs.len() as isize - 1;
        self.left.unsigned_abs().max(right.unsigned_abs())
    }

    /// Applies the operator, writing into `out`.
    pub fn apply_into(&self, f: ArrayView1<'_, f64>, out: &mut ArrayViewMut1<'_, f64>) {
        let n = self.n;
        debug_assert_eq!(f.len(), n);
        debug_assert_eq!(out.len(), n);
        let f = f.as_slice().expect("contiguous field");
        let out = out.as_slice_mut().expect("contiguous output");
        let left = self.left;
        let width = self.coeffs.len() as isize;
        // Rows whose full stencil stays inside [0, n) need no wrapping.
        let lo = (-left).max(0) as usize;
        let hi = (n as isize - (left + width - 1)).max(lo as isize) as usize;
        for (i, o) in out.iter_mut().enumerate().take(hi.min(n)).skip(lo) {
            let base = i as isize + left;
            let mut acc = 0.0;
            for (j, &c) in self.coeffs.iter().enumerate() {
                acc += c * f[(base + j as isize) as usize];
            }
            *o = acc;
        }
        let mut wrap_row = |i: usize| {
            let mut acc = 0.0;
            for (j, &c) in self.coeffs.iter().enumerate() {
                let idx = (i as isize + left + j as isize).rem_euclid(n as isize) as usize;
                acc += c * f[idx];
            }
            out[i] = acc;
        };
        for i in 0..lo.min(n) {
            wrap_row(i);
        }
        for i in hi.max(lo)..n {
            wrap_row(i);
        }
    }

    /// Applies the operator to a field.
    pub fn apply(&self, f: &Array1<f64>) -> Array1<f64> {
        let mut out = Array1::zeros(self.n);
        self.apply_into(f.view(), &mut out.view_mut());
        out
    }

    /// Applies the transpose; the transpose of a circulant stencil is the
    /// reflected stencil.
    pub fn apply_transpose(&self, f: &Array1<f64>) -> Array1<f64> {
        self.transpose().apply(f)
    }

    /// Returns the transposed operator.
    pub fn transpose(&self) -> DerivativeOperator {
        let right = self.left + self.coeffs.len() as isize - 1;
        DerivativeOperator {
            n: self.n,
            left: -right,
            coeffs: self.coeffs.iter().rev().copied().collect(),
            order: self.order,
            kind: self.kind,
        }
    }

    /// Dense matrix representation (for verification and small problems).
    pub fn to_dense(&self) -> Array2<f64> {
        let mut a = Array2::zeros((self.n, self.n));
        for i in 0..self.n {
            for (off, c) in self.stencil() {
                let j = (i as isize + off).rem_euclid(self.n as isize) as usize;
                a[[i, j]] += c;
            }
        }
        a
    }

    /// Sparse triplet export, sorted by row then column.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut t = Vec::with_capacity(self.n * self.coeffs.len());
        for i in 0..self.n {
            let mut row: Vec<(usize, f64)> = self
                .stencil()
                .map(|(off, c)| ((i as isize + off).rem_euclid(self.n as isize) as usize, c))
                .collect();
            row.sort_by_key(|&(j, _)| j);
            t.extend(row.into_iter().map(|(j, c)| (i, j, c)));
        }
        t
    }
}

/// Diagonal SBP mass matrix `M = dx * I`.
#[derive(Debug, Clone)]
pub struct MassMatrix {
    n: usize,
    dx: f64,
}

impl MassMatrix {
    /// Mass matrix matching a grid.
    pub fn new(grid: &PeriodicGrid) -> Self {
        Self {
            n: grid.n(),
            dx: grid.dx(),
        }
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Uniform quadrature weight.
    pub fn weight(&self) -> f64 {
        self.dx
    }

    /// Quadrature `1^T M f = dx * sum(f)`, using compensated summation so
    /// conserved quantities can be tracked down to a few ulps.
    pub fn quadrature(&self, f: &Array1<f64>) -> f64 {
        self.dx * compensated_sum(f.iter().copied())
    }

    /// Inner product `f^T M g` with compensated summation.
    pub fn inner(&self, f: &Array1<f64>, g: &Array1<f64>) -> f64 {
        self.dx * compensated_sum(f.iter().zip(g).map(|(&a, &b)| a * b))
    }

    /// Induced norm `sqrt(f^T M f)`.
    pub fn norm(&self, f: &Array1<f64>) -> f64 {
        self.inner(f, f).sqrt()
    }
}

/// Neumaier compensated sum: error independent of the number of terms.
fn compensated_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    for v in terms {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}

/// Upwind SBP pair together with its central average.
#[derive(Debug, Clone)]
pub struct UpwindPair {
    pub plus: DerivativeOperator,
    pub minus: DerivativeOperator,
    pub average: DerivativeOperator,
}

/// Builds the periodic central SBP operator of the given interior order.
pub fn build_central(grid: &PeriodicGrid, order: usize) -> Result<DerivativeOperator, SbpError> {
    let (_, left, coeffs) = CENTRAL_STENCILS
        .iter()
        .find(|(p, _, _)| *p == order)
        .ok_or(SbpError::UnsupportedOrder {
            kind: "central",
            order,
            supported: "2, 4, 6",
        })?;
    DerivativeOperator::from_stencil(grid, *left, coeffs, order, OperatorKind::Central)
}

/// Builds the periodic upwind SBP pair of the given interior order.
pub fn build_upwind_pair(grid: &PeriodicGrid, order: usize) -> Result<UpwindPair, SbpError> {
    let (_, left, coeffs) = UPWIND_PLUS_STENCILS
        .iter()
        .find(|(p, _, _)| *p == order)
        .ok_or(SbpError::UnsupportedOrder {
            kind: "upwind",
            order,
            supported: "1 through 6",
        })?;
    let plus =
        DerivativeOperator::from_stencil(grid, *left, coeffs, order, OperatorKind::UpwindPlus)?;
    // The minus operator is the reflection-negation of the plus stencil, which
    // realizes M D+ + D-^T M = 0 for M = dx I.
    let right = *left + coeffs.len() as isize - 1;
    let minus_coeffs: Vec<f64> = coeffs.iter().rev().map(|c| -c).collect();
    let minus = DerivativeOperator::from_stencil(
        grid,
        -right,
        &minus_coeffs,
        order,
        OperatorKind::UpwindMinus,
    )?;
    let average = average_operator(grid, &plus, &minus)?;
    Ok(UpwindPair {
        plus,
        minus,
        average,
    })
}

fn average_operator(
    grid: &PeriodicGrid,
    plus: &DerivativeOperator,
    minus: &DerivativeOperator,
) -> Result<DerivativeOperator, SbpError> {
    let left = plus.left.min(minus.left);
    let right = (plus.left + plus.coeffs.len() as isize - 1)
        .max(minus.left + minus.coeffs.len() as isize - 1);
    let mut coeffs = vec![0.0; (right - left + 1) as usize];
    for (off, c) in plus.stencil().chain(minus.stencil()) {
        coeffs[(off - left) as usize] += 0.5 * c;
    }
    // Coefficients already carry 1/dx, so bypass rescaling.
    let width = coeffs.len();
    if width >= grid.n() {
        return Err(SbpError::StencilTooWide {
            width,
            n: grid.n(),
        });
    }
    Ok(DerivativeOperator {
        n: grid.n(),
        left,
        coeffs,
        order: plus.order,
        kind: OperatorKind::Central,
    })
}

/// Residuals of the SBP identities, computed on dense matrices.
#[derive(Debug, Clone)]
pub struct SbpResiduals {
    /// `max |(M D + D^T M)[i,j]|` (for pairs, `M D+ + D-^T M`).
    pub antisymmetry: f64,
    /// `max_i |(D 1)_i|`.
    pub consistency: f64,
    /// Largest eigenvalue of `sym(M (D+ - D-))`; `None` for central operators.
    pub dissipativity: Option<f64>,
}

/// Verifies the central SBP identities on dense matrices.
pub fn sbp_residuals_central(d: &DerivativeOperator, m: &MassMatrix) -> SbpResiduals {
    SbpResiduals {
        antisymmetry: antisymmetry_residual(d, d, m),
        consistency: consistency_residual(d),
        dissipativity: None,
    }
}

/// Verifies the upwind SBP identities on dense matrices.
pub fn sbp_residuals_pair(pair: &UpwindPair, m: &MassMatrix) -> SbpResiduals {
    SbpResiduals {
        antisymmetry: antisymmetry_residual(&pair.plus, &pair.minus, m),
        consistency: consistency_residual(&pair.plus).max(consistency_residual(&pair.minus)),
        dissipativity: Some(dissipation_max_eigenvalue(pair, m)),
    }
}

fn antisymmetry_residual(
    d_a: &DerivativeOperator,
    d_b: &DerivativeOperator,
    m: &MassMatrix,
) -> f64 {
    let a = d_a.to_dense();
    let b = d_b.to_dense();
    let mut worst = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            worst = worst.max((m.weight() * (a[[i, j]] + b[[j, i]])).abs());
        }
    }
    worst
}

fn consistency_residual(d: &DerivativeOperator) -> f64 {
    let ones = Array1::ones(d.n());
    d.apply(&ones).iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Eigenvalues of the symmetric circulant `sym(M (D+ - D-))` are its symbol
/// values `dx * sum_k s_k cos(k theta_j)`, so no dense eigensolver is needed.
fn dissipation_max_eigenvalue(pair: &UpwindPair, m: &MassMatrix) -> f64 {
    let n = pair.plus.n();
    let mut s = std::collections::BTreeMap::new();
    for (off, c) in pair.plus.stencil() {
        *s.entry(off).or_insert(0.0) += c;
    }
    for (off, c) in pair.minus.stencil() {
        *s.entry(off).or_insert(0.0) -= c;
    }
    let mut worst = f64::NEG_INFINITY;
    for j in 0..n {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let val: f64 = s
            .iter()
            .map(|(&k, &c)| c * (k as f64 * theta).cos())
            .sum();
        worst = worst.max(m.weight() * val);
    }
    worst
}

/// Grid, mass matrix, and derivative operators bundled for a semidiscretization.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    grid: PeriodicGrid,
    mass: MassMatrix,
    mode: OperatorMode,
    order: usize,
    d: DerivativeOperator,
    pair: Option<UpwindPair>,
}

impl OperatorSet {
    /// Central-operator set of the given order.
    pub fn central(grid: PeriodicGrid, order: usize) -> Result<Self, SbpError> {
        let d = build_central(&grid, order)?;
        let mass = MassMatrix::new(&grid);
        Ok(Self {
            grid,
            mass,
            mode: OperatorMode::Central,
            order,
            d,
            pair: None,
        })
    }

    /// Upwind-pair set of the given order; `d()` is the pair average.
    pub fn upwind(grid: PeriodicGrid, order: usize) -> Result<Self, SbpError> {
        let pair = build_upwind_pair(&grid, order)?;
        let mass = MassMatrix::new(&grid);
        let d = pair.average.clone();
        Ok(Self {
            grid,
            mass,
            mode: OperatorMode::Upwind,
            order,
            d,
            pair: Some(pair),
        })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn mass(&self) -> &MassMatrix {
        &self.mass
    }

    pub fn mode(&self) -> OperatorMode {
        self.mode
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Central operator (the pair average in upwind mode).
    pub fn d(&self) -> &DerivativeOperator {
        &self.d
    }

    /// Upwind pair, present only in upwind mode.
    pub fn pair(&self) -> Option<&UpwindPair> {
        self.pair.as_ref()
    }

    /// Operator used in dissipative products: `D-` in upwind mode, `D` otherwise.
    pub fn d_lower(&self) -> &DerivativeOperator {
        self.pair.as_ref().map_or(&self.d, |p| &p.minus)
    }

    /// Operator used on flux divergences: `D+` in upwind mode, `D` otherwise.
    pub fn d_upper(&self) -> &DerivativeOperator {
        self.pair.as_ref().map_or(&self.d, |p| &p.plus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid(n: usize) -> PeriodicGrid {
        PeriodicGrid::new(-1.0, 2.0, n).unwrap()
    }

    #[test]
    fn central_identities_hold() {
        for &order in CENTRAL_ORDERS {
            for n in [8, 32, 64] {
                let g = grid(n);
                let d = build_central(&g, order).unwrap();
                let m = MassMatrix::new(&g);
                let r = sbp_residuals_central(&d, &m);
                assert!(r.antisymmetry <= 1e-13, "order {order} n {n}");
                assert!(r.consistency <= 1e-13, "order {order} n {n}");
            }
        }
    }

    #[test]
    fn upwind_identities_hold() {
        for &order in UPWIND_ORDERS {
            for n in [16, 32, 64] {
                let g = grid(n);
                let pair = build_upwind_pair(&g, order).unwrap();
                let m = MassMatrix::new(&g);
                let r = sbp_residuals_pair(&pair, &m);
                assert!(r.antisymmetry <= 1e-13, "order {order} n {n}");
                assert!(r.consistency <= 1e-13, "order {order} n {n}");
                assert!(
                    r.dissipativity.unwrap() <= 1e-12,
                    "order {order} n {n}: {:?}",
                    r.dissipativity
                );
            }
        }
    }

    #[test]
    fn first_order_pair_matches_classic_stencils() {
        let g = PeriodicGrid::new(0.0, 1.0, 10).unwrap();
        let pair = build_upwind_pair(&g, 1).unwrap();
        let f = g.sample(|x| x);
        // Forward and backward differences of a linear field, away from the seam.
        let dp = pair.plus.apply(&f);
        let dm = pair.minus.apply(&f);
        for i in 1..9 {
            assert_relative_eq!(dp[i], 1.0, max_relative = 1e-13);
            assert_relative_eq!(dm[i], 1.0, max_relative = 1e-13);
        }
        // D+ D- of x^2-like data reproduces the classic second difference.
        let d2 = pair.plus.to_dense().dot(&pair.minus.to_dense());
        let dx2 = g.dx() * g.dx();
        assert_relative_eq!(d2[[5, 4]], 1.0 / dx2, max_relative = 1e-12);
        assert_relative_eq!(d2[[5, 5]], -2.0 / dx2, max_relative = 1e-12);
        assert_relative_eq!(d2[[5, 6]], 1.0 / dx2, max_relative = 1e-12);
    }

    #[test]
    fn quadrature_weights_sum_to_domain_length() {
        let g = grid(100);
        let m = MassMatrix::new(&g);
        assert_relative_eq!(m.quadrature(&Array1::ones(100)), 3.0, max_relative = 1e-14);
    }

    #[test]
    fn derivative_is_exact_on_resolved_polynomials() {
        // An order-p operator differentiates periodic trig modes to O(dx^p) and
        // low-degree local polynomials exactly; probe with the stencil moments.
        let g = PeriodicGrid::new(0.0, 1.0, 64).unwrap();
        for (ops, order) in [
            (build_central(&g, 4).unwrap(), 4usize),
            (build_upwind_pair(&g, 3).unwrap().plus, 3usize),
        ] {
            for m in 0..=order {
                let moment: f64 = ops
                    .stencil()
                    .map(|(k, c)| c * (k as f64).powi(m as i32))
                    .sum();
                let expected = if m == 1 { 1.0 / g.dx() } else { 0.0 };
                assert_relative_eq!(moment, expected, epsilon = 1e-10 / g.dx());
            }
        }
    }

    #[test]
    fn transpose_matches_dense_transpose() {
        let g = grid(16);
        let d = build_upwind_pair(&g, 4).unwrap().plus;
        let dt = d.transpose().to_dense();
        let dense_t = d.to_dense().t().to_owned();
        for (a, b) in dt.iter().zip(dense_t.iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn apply_matches_dense_product_with_wrapping() {
        let g = grid(12);
        for op in [
            build_central(&g, 6).unwrap(),
            build_upwind_pair(&g, 5).unwrap().minus,
        ] {
            let f = g.sample(|x| (2.0 * std::f64::consts::PI * x / 3.0).sin() + 0.3 * x.cos());
            let via_stencil = op.apply(&f);
            let via_dense = op.to_dense().dot(&f);
            for (a, b) in via_stencil.iter().zip(via_dense.iter()) {
                assert_relative_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn rejects_unsupported_orders_and_tiny_grids() {
        let g = grid(8);
        assert!(build_central(&g, 3).is_err());
        assert!(build_upwind_pair(&g, 7).is_err());
        let tiny = PeriodicGrid::new(0.0, 1.0, 4).unwrap();
        assert!(build_central(&tiny, 6).is_err());
    }
}
