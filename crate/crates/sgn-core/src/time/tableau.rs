//! Embedded explicit Runge-Kutta tableaus with order-condition checks.

/// Coefficients of an embedded explicit Runge-Kutta pair.
#[derive(Debug, Clone)]
pub struct ButcherTableau {
    name: &'static str,
    order: usize,
    embedded_order: usize,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    b_hat: Vec<f64>,
    c: Vec<f64>,
}

impl ButcherTableau {
    /// Dormand-Prince 5(4), the seven-stage pair with a fifth-order
    /// propagating solution and fourth-order error estimator.
    pub fn dormand_prince_54() -> Self {
        #[rustfmt::skip]
        let a = vec![
            vec![],
            vec![1.0 / 5.0],
            vec![3.0 / 40.0, 9.0 / 40.0],
            vec![44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
            vec![19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
            vec![9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
                 -5103.0 / 18656.0],
            vec![35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
                 11.0 / 84.0],
        ];
        #[rustfmt::skip]
        let b = vec![35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
                     11.0 / 84.0, 0.0];
        #[rustfmt::skip]
        let b_hat = vec![5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0,
                         -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];
        let c = vec![0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
        Self { name: "DP5(4)", order: 5, embedded_order: 4, a, b, b_hat, c }
    }

    /// Bogacki-Shampine 3(2), the four-stage pair with a third-order
    /// propagating solution and second-order error estimator.
    pub fn bogacki_shampine_32() -> Self {
        let a = vec![
            vec![],
            vec![1.0 / 2.0],
            vec![0.0, 3.0 / 4.0],
            vec![2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0],
        ];
        let b = vec![2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0, 0.0];
        let b_hat = vec![7.0 / 24.0, 1.0 / 4.0, 1.0 / 3.0, 1.0 / 8.0];
        let c = vec![0.0, 1.0 / 2.0, 3.0 / 4.0, 1.0];
        Self { name: "BS3(2)", order: 3, embedded_order: 2, a, b, b_hat, c }
    }

    /// Human-readable pair name.
    pub fn name(&self) -> &'static str {
        self.name
    }

    /// Order of the propagating solution.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Order of the embedded error estimator.
    pub fn embedded_order(&self) -> usize {
        self.embedded_order
    }

    /// Number of stages.
    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// Row `i` of the stage coupling matrix (entries below the diagonal).
    pub fn a_row(&self, i: usize) -> &[f64] {
        &self.a[i]
    }

    /// Propagating quadrature weights.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Embedded quadrature weights.
    pub fn b_hat(&self) -> &[f64] {
        &self.b_hat
    }

    /// Stage abscissae.
    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// Residuals of all rooted-tree order conditions: the propagating weights
    /// up to [`order`](Self::order), then the embedded weights up to
    /// [`embedded_order`](Self::embedded_order).
    pub fn order_condition_residuals(&self) -> Vec<f64> {
        let mut res = elementary_residuals(&self.a, &self.b, &self.c, self.order);
        res.extend(elementary_residuals(&self.a, &self.b_hat, &self.c, self.embedded_order));
        res
    }

    /// Largest deviation of the abscissae from the stage row sums.
    pub fn row_sum_residual(&self) -> f64 {
        self.c
            .iter()
            .zip(&self.a)
            .map(|(&ci, row)| (ci - row.iter().sum::<f64>()).abs())
            .fold(0.0, f64::max)
    }
}

/// Order-condition residuals of weights `b` against trees up to `order`
/// (supported through order five, enough for the pairs shipped here).
fn elementary_residuals(a: &[Vec<f64>], b: &[f64], c: &[f64], order: usize) -> Vec<f64> {
    assert!(order <= 5, "order conditions implemented through order five");
    let s = b.len();
    let apply = |v: &[f64]| -> Vec<f64> {
        (0..s)
            .map(|i| a[i].iter().zip(v).map(|(&aij, &vj)| aij * vj).sum())
            .collect()
    };
    let dot = |v: &[f64]| -> f64 { b.iter().zip(v).map(|(&bi, &vi)| bi * vi).sum() };
    let pow = |p: u32| -> Vec<f64> { c.iter().map(|&ci| ci.powi(p as i32)).collect() };
    let mul = |x: &[f64], y: &[f64]| -> Vec<f64> {
        x.iter().zip(y).map(|(&a, &b)| a * b).collect()
    };

    let ones = vec![1.0; s];
    let ac = apply(c);
    let mut res = vec![dot(&ones) - 1.0];
    if order >= 2 {
        res.push(dot(c) - 1.0 / 2.0);
    }
    if order >= 3 {
        res.push(dot(&pow(2)) - 1.0 / 3.0);
        res.push(dot(&ac) - 1.0 / 6.0);
    }
    if order >= 4 {
        let ac2 = apply(&pow(2));
        let aac = apply(&ac);
        res.push(dot(&pow(3)) - 1.0 / 4.0);
        res.push(dot(&mul(c, &ac)) - 1.0 / 8.0);
        res.push(dot(&ac2) - 1.0 / 12.0);
        res.push(dot(&aac) - 1.0 / 24.0);
    }
    if order >= 5 {
        let ac2 = apply(&pow(2));
        let aac = apply(&ac);
        res.push(dot(&pow(4)) - 1.0 / 5.0);
        res.push(dot(&mul(&pow(2), &ac)) - 1.0 / 10.0);
        res.push(dot(&mul(c, &ac2)) - 1.0 / 15.0);
        res.push(dot(&mul(c, &aac)) - 1.0 / 30.0);
        res.push(dot(&mul(&ac, &ac)) - 1.0 / 20.0);
        res.push(dot(&apply(&pow(3))) - 1.0 / 20.0);
        res.push(dot(&apply(&mul(c, &ac))) - 1.0 / 40.0);
        res.push(dot(&apply(&ac2)) - 1.0 / 60.0);
        res.push(dot(&apply(&aac)) - 1.0 / 120.0);
    }
    res
}
