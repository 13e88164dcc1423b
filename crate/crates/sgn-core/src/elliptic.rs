//! Assembly and solution of the symmetric positive definite elliptic operator
//! that propagates the velocity tendency of the classical SGN system.
//!
//! The operator `A` acts on a periodic grid and `S = M A` is symmetric
//! positive definite with a cyclic band profile. `S` is factorized directly by
//! banded Cholesky on the leading block plus a small Schur complement for the
//! periodic wrap-around; a diagonally preconditioned conjugate-gradient
//! backend is available as a fallback.

use crate::error::EllipticError;
use crate::sbp::{DerivativeOperator, OperatorMode, OperatorSet};
use ndarray::{Array1, Array2};

/// Linear-solver backend for the elliptic step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverBackend {
    /// Cyclic banded Cholesky factorization (exact up to round-off).
    #[default]
    Direct,
    /// Diagonally preconditioned conjugate gradients, relative tolerance 1e-12.
    ConjugateGradient,
}

const CG_REL_TOL: f64 = 1e-12;

/// Assembled elliptic operator `S = M A` with an attached factorization.
#[derive(Debug, Clone)]
pub struct EllipticOperator {
    n: usize,
    k: usize,
    /// Row-major cyclic band: `bands[[i, k + o]] = S[i, (i + o) mod n]`.
    bands: Array2<f64>,
    weight: f64,
    symmetry_residual: f64,
    h_token: u64,
    backend: SolverBackend,
    factor: Option<Factor>,
}

#[derive(Debug, Clone)]
enum Factor {
    Cyclic(CyclicCholesky),
    Dense(DenseCholesky),
}

/// Builds the flat-bathymetry operator `A = h - 1/3 Da h^3 Db`.
pub fn assemble_flat(
    ops: &OperatorSet,
    h: &Array1<f64>,
) -> Result<EllipticOperator, EllipticError> {
    assemble(ops, h, None, 0.0, SolverBackend::Direct)
}

/// Builds the mild-slope operator with the `3/4 h (Db)^2` zeroth-order term.
pub fn assemble_mild(
    ops: &OperatorSet,
    h: &Array1<f64>,
    b: &Array1<f64>,
) -> Result<EllipticOperator, EllipticError> {
    assemble(ops, h, Some(b), 0.75, SolverBackend::Direct)
}

/// Builds the full-system operator with the `h (Db)^2` zeroth-order term.
pub fn assemble_full(
    ops: &OperatorSet,
    h: &Array1<f64>,
    b: &Array1<f64>,
) -> Result<EllipticOperator, EllipticError> {
    assemble(ops, h, Some(b), 1.0, SolverBackend::Direct)
}

/// Assembles `S = M A` for any variant and backend.
///
/// With `b = None` the flat operator is built; otherwise the slope terms
/// `1/2 Da h^2 (Db) - 1/2 h^2 (Db) Db + slope_sq h (Db)^2` are added, where
/// `Db` of the bathymetry is always taken with the central operator.
pub fn assemble(
    ops: &OperatorSet,
    h: &Array1<f64>,
    b: Option<&Array1<f64>>,
    slope_sq: f64,
    backend: SolverBackend,
) -> Result<EllipticOperator, EllipticError> {
    let n = ops.grid().n();
    if h.len() != n {
        return Err(EllipticError::DimensionMismatch {
            expected: n,
            got: h.len(),
        });
    }
    if let Some((index, &value)) = h.iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
        return Err(EllipticError::NonPositiveDepth { index, value });
    }
    let (da, db) = match ops.mode() {
        OperatorMode::Central => (ops.d(), ops.d()),
        OperatorMode::Upwind => {
            let pair = ops.pair().expect("upwind mode carries a pair");
            (&pair.plus, &pair.minus)
        }
    };
    let k = da.reach() + db.reach();
    let dx = ops.grid().dx();
    let mut builder = BandBuilder::new(n, k);
    builder.add_diag(1.0, h);
    let h3 = h.mapv(|v| v * v * v);
    builder.add_triple(-1.0 / 3.0, da, &h3, db);
    if let Some(b) = b {
        let slope = ops.d().apply(b);
        let h2s = h * h * &slope;
        builder.add_left(0.5, da, &h2s);
        builder.add_right(-0.5, &h2s, db);
        builder.add_diag(slope_sq, &(h * &slope * &slope));
    }
    let mut op = builder.finish(dx, h_token(h), backend);
    if backend == SolverBackend::Direct {
        op.factorize()?;
    }
    Ok(op)
}

impl EllipticOperator {
    /// Grid size the operator was assembled for.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Cyclic half-bandwidth of `S`.
    pub fn half_bandwidth(&self) -> usize {
        self.k
    }

    /// Hash of the depth field used at assembly, to guard against stale reuse.
    pub fn h_token(&self) -> u64 {
        self.h_token
    }

    /// Max asymmetry `|S[i,j] - S[j,i]|` observed before symmetrization.
    pub fn symmetry_residual(&self) -> f64 {
        self.symmetry_residual
    }

    /// Matrix-vector product `S x`.
    pub fn matvec(&self, x: &Array1<f64>) -> Array1<f64> {
        let n = self.n;
        let k = self.k as isize;
        let mut y = Array1::zeros(n);
        for i in 0..n {
            let mut acc = 0.0;
            for o in -k..=k {
                let j = (i as isize + o).rem_euclid(n as isize) as usize;
                acc += self.bands[[i, (k + o) as usize]] * x[j];
            }
            y[i] = acc;
        }
        y
    }

    /// Product `A x = S x / dx`.
    pub fn apply_a(&self, x: &Array1<f64>) -> Array1<f64> {
        self.matvec(x) / self.weight
    }

    /// Solves `A x = y`, i.e. `S x = M y`.
    pub fn solve(&self, y: &Array1<f64>) -> Result<Array1<f64>, EllipticError> {
        if y.len() != self.n {
            return Err(EllipticError::DimensionMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        let rhs = y * self.weight;
        match (&self.factor, self.backend) {
            (Some(Factor::Cyclic(f)), _) => Ok(f.solve(&rhs)),
            (Some(Factor::Dense(f)), _) => Ok(f.solve(&rhs)),
            (None, SolverBackend::ConjugateGradient) => self.solve_cg(&rhs),
            (None, SolverBackend::Direct) => {
                unreachable!("direct backend factorizes at assembly")
            }
        }
    }

    /// Relative residual `||A x - y||_M / ||y||_M`.
    pub fn residual(&self, x: &Array1<f64>, y: &Array1<f64>) -> f64 {
        let r = self.apply_a(x) - y;
        let norm = |f: &Array1<f64>| (self.weight * f.dot(f)).sqrt();
        norm(&r) / norm(y).max(f64::MIN_POSITIVE)
    }

    /// Dense representation of `S` for verification.
    pub fn to_dense(&self) -> Array2<f64> {
        let n = self.n;
        let k = self.k as isize;
        let mut s = Array2::zeros((n, n));
        for i in 0..n {
            for o in -k..=k {
                let j = (i as isize + o).rem_euclid(n as isize) as usize;
                s[[i, j]] += self.bands[[i, (k + o) as usize]];
            }
        }
        s
    }

    /// Sparse triplet export of `S`, sorted by row then column.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n;
        let k = self.k as isize;
        let mut t = Vec::with_capacity(n * (2 * self.k + 1));
        for i in 0..n {
            let mut row: Vec<(usize, f64)> = (-k..=k)
                .map(|o| {
                    (
                        (i as isize + o).rem_euclid(n as isize) as usize,
                        self.bands[[i, (k + o) as usize]],
                    )
                })
                .filter(|&(_, v)| v != 0.0)
                .collect();
            row.sort_by_key(|&(j, _)| j);
            t.extend(row.into_iter().map(|(j, v)| (i, j, v)));
        }
        t
    }

    fn factorize(&mut self) -> Result<(), EllipticError> {
        if self.factor.is_some() {
            return Ok(());
        }
        self.factor = Some(if self.n >= 2 * self.k + 2 && self.k > 0 {
            Factor::Cyclic(CyclicCholesky::new(&self.bands, self.n, self.k)?)
        } else {
            Factor::Dense(DenseCholesky::new(&self.to_dense())?)
        });
        Ok(())
    }

    fn solve_cg(&self, rhs: &Array1<f64>) -> Result<Array1<f64>, EllipticError> {
        let k = self.k as isize;
        let inv_diag = (0..self.n)
            .map(|i| 1.0 / self.bands[[i, k as usize]])
            .collect::<Array1<f64>>();
        let mut x = Array1::zeros(self.n);
        let mut r = rhs.clone();
        let mut z = &r * &inv_diag;
        let mut p = z.clone();
        let mut rz = r.dot(&z);
        let rhs_norm = rhs.dot(rhs).sqrt().max(f64::MIN_POSITIVE);
        let max_iters = 20 * self.n.max(100);
        for _ in 0..max_iters {
            if r.dot(&r).sqrt() <= CG_REL_TOL * rhs_norm {
                return Ok(x);
            }
            let sp = self.matvec(&p);
            let alpha = rz / p.dot(&sp);
            x = x + alpha * &p;
            r = r - alpha * &sp;
            z = &r * &inv_diag;
            let rz_next = r.dot(&z);
            p = &z + (rz_next / rz) * &p;
            rz = rz_next;
        }
        let residual = r.dot(&r).sqrt() / rhs_norm;
        if residual <= CG_REL_TOL * 10.0 {
            Ok(x)
        } else {
            Err(EllipticError::CgStalled {
                residual,
                iters: max_iters,
            })
        }
    }
}

/// Symmetry and positivity report for an assembled operator.
#[derive(Debug, Clone)]
pub struct SpdReport {
    /// Max `|S[i,j] - S[j,i]|` before symmetrization.
    pub symmetry_residual: f64,
    /// Minimum of `v^T S v / v^T M v` over the random probes.
    pub min_rayleigh: f64,
}

/// Probes symmetry and positive definiteness with `probes` random vectors.
pub fn verify_spd(op: &EllipticOperator, probes: usize, seed: u64) -> SpdReport {
    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut next = move || {
        // splitmix64, mapped to [-1, 1); plenty for Rayleigh probing.
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 52) as f64 * 2.0 - 1.0
    };
    let mut min_rayleigh = f64::INFINITY;
    for _ in 0..probes.max(1) {
        let v = Array1::from_iter((0..op.n).map(|_| next()));
        let num = v.dot(&op.matvec(&v));
        let den = op.weight * v.dot(&v);
        min_rayleigh = min_rayleigh.min(num / den);
    }
    SpdReport {
        symmetry_residual: op.symmetry_residual,
        min_rayleigh,
    }
}

fn h_token(h: &Array1<f64>) -> u64 {
    // FNV-1a over the raw bit patterns; only used to detect stale reuse.
    let mut hash = 0xcbf29ce484222325u64;
    for v in h {
        for byte in v.to_bits().to_le_bytes() {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
    }
    hash
}

/// Accumulates circulant-band terms of `A`, then scales by `dx` into `S`.
struct BandBuilder {
    n: usize,
    k: usize,
    bands: Array2<f64>,
}

impl BandBuilder {
    fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            bands: Array2::zeros((n, 2 * k + 1)),
        }
    }

    fn add_diag(&mut self, alpha: f64, v: &Array1<f64>) {
        for i in 0..self.n {
            self.bands[[i, self.k]] += alpha * v[i];
        }
    }

    /// Adds `alpha * Da diag(v) Db`.
    fn add_triple(
        &mut self,
        alpha: f64,
        da: &DerivativeOperator,
        v: &Array1<f64>,
        db: &DerivativeOperator,
    ) {
        let n = self.n as isize;
        let da_stencil: Vec<(isize, f64)> = da.stencil().collect();
        let db_stencil: Vec<(isize, f64)> = db.stencil().collect();
        for i in 0..self.n {
            for &(oa, ca) in &da_stencil {
                let mid = (i as isize + oa).rem_euclid(n) as usize;
                let w = alpha * ca * v[mid];
                for &(ob, cb) in &db_stencil {
                    self.bands[[i, (self.k as isize + oa + ob) as usize]] += w * cb;
                }
            }
        }
    }

    /// Adds `alpha * Da diag(v)`.
    fn add_left(&mut self, alpha: f64, da: &DerivativeOperator, v: &Array1<f64>) {
        let n = self.n as isize;
        for i in 0..self.n {
            for (oa, ca) in da.stencil() {
                let j = (i as isize + oa).rem_euclid(n) as usize;
                self.bands[[i, (self.k as isize + oa) as usize]] += alpha * ca * v[j];
            }
        }
    }

    /// Adds `alpha * diag(v) Db`.
    fn add_right(&mut self, alpha: f64, v: &Array1<f64>, db: &DerivativeOperator) {
        for i in 0..self.n {
            for (ob, cb) in db.stencil() {
                self.bands[[i, (self.k as isize + ob) as usize]] += alpha * v[i] * cb;
            }
        }
    }

    fn finish(self, dx: f64, h_token: u64, backend: SolverBackend) -> EllipticOperator {
        let Self { n, k, mut bands } = self;
        bands *= dx;
        // Record round-off asymmetry, then symmetrize so the factorization sees
        // an exactly symmetric matrix.
        let mut residual = 0.0f64;
        for i in 0..n {
            for o in 1..=k as isize {
                let j = (i as isize + o).rem_euclid(n as isize) as usize;
                let a = bands[[i, (k as isize + o) as usize]];
                let b = bands[[j, (k as isize - o) as usize]];
                residual = residual.max((a - b).abs());
                let avg = 0.5 * (a + b);
                bands[[i, (k as isize + o) as usize]] = avg;
                bands[[j, (k as isize - o) as usize]] = avg;
            }
        }
        EllipticOperator {
            n,
            k,
            bands,
            weight: dx,
            symmetry_residual: residual,
            h_token,
            backend,
            factor: None,
        }
    }
}

/// Bordered cyclic-band Cholesky: the last `k` indices form a dense border so
/// the leading block is strictly banded SPD.
#[derive(Debug, Clone)]
struct CyclicCholesky {
    m: usize,
    k: usize,
    /// `low[[i, d]] = L[i, i - d]` for the banded block, `d in 0..=k`.
    low: Array2<f64>,
    /// Border rows restricted to interior columns, `k x m`.
    c: Array2<f64>,
    /// `X^T` rows where `X = B^{-1} C^T`, `k x m`.
    x_t: Array2<f64>,
    /// Dense Cholesky of the Schur complement `E - C X`.
    schur: DenseCholesky,
}

impl CyclicCholesky {
    fn new(bands: &Array2<f64>, n: usize, k: usize) -> Result<Self, EllipticError> {
        let m = n - k;
        let ki = k as isize;
        let entry = |i: usize, j: usize| -> f64 {
            let mut o = j as isize - i as isize;
            if o > n as isize / 2 {
                o -= n as isize;
            } else if o < -(n as isize) / 2 {
                o += n as isize;
            }
            if o.abs() > ki {
                0.0
            } else {
                bands[[i, (ki + o) as usize]]
            }
        };
        // Banded Cholesky of the leading block.
        let mut low = Array2::zeros((m, k + 1));
        for i in 0..m {
            let j0 = i.saturating_sub(k);
            for j in j0..=i {
                let mut s = entry(i, j);
                for t in j.saturating_sub(k).max(j0)..j {
                    s -= low[[i, i - t]] * low[[j, j - t]];
                }
                if i == j {
                    if s <= 0.0 {
                        return Err(EllipticError::NotPositiveDefinite { row: i, pivot: s });
                    }
                    low[[i, 0]] = s.sqrt();
                } else {
                    low[[i, i - j]] = s / low[[j, 0]];
                }
            }
        }
        // Border block and its interior solves.
        let mut c = Array2::<f64>::zeros((k, m));
        let mut e = Array2::<f64>::zeros((k, k));
        for r in 0..k {
            let i = m + r;
            for o in -ki..=ki {
                let j = (i as isize + o).rem_euclid(n as isize) as usize;
                let v = bands[[i, (ki + o) as usize]];
                if j < m {
                    c[[r, j]] += v;
                } else {
                    e[[r, j - m]] += v;
                }
            }
        }
        let mut x_t = Array2::zeros((k, m));
        for r in 0..k {
            let rhs = c.row(r).to_owned();
            let sol = banded_solve(&low, k, &rhs);
            x_t.row_mut(r).assign(&sol);
        }
        // Schur complement, symmetrized against round-off.
        let mut schur_mat = Array2::zeros((k, k));
        for r in 0..k {
            for s in 0..k {
                schur_mat[[r, s]] = e[[r, s]] - c.row(r).dot(&x_t.row(s));
            }
        }
        for r in 0..k {
            for s in 0..r {
                let avg = 0.5 * (schur_mat[[r, s]] + schur_mat[[s, r]]);
                schur_mat[[r, s]] = avg;
                schur_mat[[s, r]] = avg;
            }
        }
        let schur = DenseCholesky::new(&schur_mat)?;
        Ok(Self {
            m,
            k,
            low,
            c,
            x_t,
            schur,
        })
    }

    fn solve(&self, rhs: &Array1<f64>) -> Array1<f64> {
        let (m, k) = (self.m, self.k);
        let r_i = rhs.slice(ndarray::s![..m]).to_owned();
        let z = banded_solve(&self.low, k, &r_i);
        let mut t = Array1::zeros(k);
        for r in 0..k {
            t[r] = rhs[m + r] - self.c.row(r).dot(&z);
        }
        let w = self.schur.solve(&t);
        let mut x = Array1::zeros(m + k);
        x.slice_mut(ndarray::s![..m]).assign(&z);
        for r in 0..k {
            let wr = w[r];
            if wr != 0.0 {
                let row = self.x_t.row(r);
                for j in 0..m {
                    x[j] -= wr * row[j];
                }
            }
            x[m + r] = w[r];
        }
        x
    }
}

/// Solves `L L^T x = rhs` with the banded lower factor.
fn banded_solve(low: &Array2<f64>, k: usize, rhs: &Array1<f64>) -> Array1<f64> {
    let m = rhs.len();
    let mut z = rhs.clone();
    for i in 0..m {
        let mut s = z[i];
        for d in 1..=k.min(i) {
            s -= low[[i, d]] * z[i - d];
        }
        z[i] = s / low[[i, 0]];
    }
    for i in (0..m).rev() {
        let mut s = z[i];
        for d in 1..=k.min(m - 1 - i) {
            s -= low[[i + d, d]] * z[i + d];
        }
        z[i] = s / low[[i, 0]];
    }
    z
}

/// Plain dense Cholesky for small or nearly full matrices.
#[derive(Debug, Clone)]
struct DenseCholesky {
    low: Array2<f64>,
}

impl DenseCholesky {
    fn new(a: &Array2<f64>) -> Result<Self, EllipticError> {
        let n = a.nrows();
        let mut low = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..=i {
                let mut s = a[[i, j]];
                for t in 0..j {
                    s -= low[[i, t]] * low[[j, t]];
                }
                if i == j {
                    if s <= 0.0 {
                        return Err(EllipticError::NotPositiveDefinite { row: i, pivot: s });
                    }
                    low[[i, j]] = s.sqrt();
                } else {
                    low[[i, j]] = s / low[[j, j]];
                }
            }
        }
        Ok(Self { low })
    }

    fn solve(&self, rhs: &Array1<f64>) -> Array1<f64> {
        let n = rhs.len();
        let mut z = rhs.clone();
        for i in 0..n {
            let mut s = z[i];
            for t in 0..i {
                s -= self.low[[i, t]] * z[t];
            }
            z[i] = s / self.low[[i, i]];
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for t in i + 1..n {
                s -= self.low[[t, i]] * z[t];
            }
            z[i] = s / self.low[[i, i]];
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PeriodicGrid;
    use approx::assert_relative_eq;

    fn smooth_h(grid: &PeriodicGrid) -> Array1<f64> {
        grid.sample(|x| 1.0 + 0.3 * (2.0 * std::f64::consts::PI * x / grid.length()).sin())
    }

    fn smooth_b(grid: &PeriodicGrid) -> Array1<f64> {
        grid.sample(|x| 0.25 * (4.0 * std::f64::consts::PI * x / grid.length()).cos())
    }

    fn dense_reference(ops: &OperatorSet, h: &Array1<f64>, b: Option<&Array1<f64>>, c2: f64) -> Array2<f64> {
        let (da, db) = match ops.mode() {
            OperatorMode::Central => (ops.d().to_dense(), ops.d().to_dense()),
            OperatorMode::Upwind => {
                let p = ops.pair().unwrap();
                (p.plus.to_dense(), p.minus.to_dense())
            }
        };
        let diag = Array2::from_diag(h);
        let h3 = Array2::from_diag(&h.mapv(|v| v * v * v));
        let mut a = diag - (1.0 / 3.0) * da.dot(&h3).dot(&db);
        if let Some(b) = b {
            let slope = ops.d().apply(b);
            let h2s = Array2::from_diag(&(h * h * &slope));
            let hs2 = Array2::from_diag(&(h * &slope * &slope));
            a = a + 0.5 * da.dot(&h2s) - 0.5 * h2s.dot(&db) + c2 * hs2;
        }
        let mut s = a;
        s *= ops.grid().dx();
        s
    }

    #[test]
    fn band_assembly_matches_dense_reference() {
        for (mode, order) in [
            (OperatorMode::Central, 4usize),
            (OperatorMode::Upwind, 3usize),
        ] {
            let grid = PeriodicGrid::new(-2.0, 3.0, 28).unwrap();
            let ops = match mode {
                OperatorMode::Central => OperatorSet::central(grid, order).unwrap(),
                OperatorMode::Upwind => OperatorSet::upwind(grid, order).unwrap(),
            };
            let h = smooth_h(ops.grid());
            let b = smooth_b(ops.grid());
            for (bopt, c2) in [(None, 0.0), (Some(&b), 0.75), (Some(&b), 1.0)] {
                let op = assemble(&ops, &h, bopt, c2, SolverBackend::Direct).unwrap();
                let dense = dense_reference(&ops, &h, bopt, c2);
                let built = op.to_dense();
                for i in 0..built.nrows() {
                    for j in 0..built.ncols() {
                        // The dense reference is unsymmetrized; compare against
                        // its symmetric part, which assembly stores.
                        let sym = 0.5 * (dense[[i, j]] + dense[[j, i]]);
                        assert_relative_eq!(built[[i, j]], sym, epsilon = 1e-12);
                    }
                }
                assert!(op.symmetry_residual() <= 1e-13);
            }
        }
    }

    #[test]
    fn direct_solve_reaches_roundoff_residual() {
        for (mode, order, n) in [
            (OperatorMode::Central, 2usize, 64usize),
            (OperatorMode::Central, 6, 96),
            (OperatorMode::Upwind, 4, 64),
        ] {
            let grid = PeriodicGrid::new(0.0, 10.0, n).unwrap();
            let ops = match mode {
                OperatorMode::Central => OperatorSet::central(grid, order).unwrap(),
                OperatorMode::Upwind => OperatorSet::upwind(grid, order).unwrap(),
            };
            let h = smooth_h(ops.grid());
            let b = smooth_b(ops.grid());
            let y = ops.grid().sample(|x| (x * 0.7).sin() + 0.2);
            for op in [
                assemble_flat(&ops, &h).unwrap(),
                assemble_mild(&ops, &h, &b).unwrap(),
                assemble_full(&ops, &h, &b).unwrap(),
            ] {
                let x = op.solve(&y).unwrap();
                assert!(
                    op.residual(&x, &y) <= 1e-12,
                    "mode {mode:?} order {order}: residual {}",
                    op.residual(&x, &y)
                );
            }
        }
    }

    #[test]
    fn dense_fallback_and_band_agree() {
        // Order-6 upwind on 12 nodes wraps enough to force the dense path.
        let grid = PeriodicGrid::new(0.0, 5.0, 12).unwrap();
        let ops = OperatorSet::upwind(grid, 6).unwrap();
        let h = smooth_h(ops.grid());
        let op = assemble_flat(&ops, &h).unwrap();
        assert!(matches!(op.factor, Some(Factor::Dense(_))));
        let y = ops.grid().sample(|x| x.cos());
        let x = op.solve(&y).unwrap();
        assert!(op.residual(&x, &y) <= 1e-12);
    }

    #[test]
    fn cg_backend_matches_direct() {
        let grid = PeriodicGrid::new(-5.0, 5.0, 80).unwrap();
        let ops = OperatorSet::central(grid, 4).unwrap();
        let h = smooth_h(ops.grid());
        let y = ops.grid().sample(|x| (0.9 * x).sin());
        let direct = assemble_flat(&ops, &h).unwrap().solve(&y).unwrap();
        let cg_op = assemble(&ops, &h, None, 0.0, SolverBackend::ConjugateGradient).unwrap();
        let cg = cg_op.solve(&y).unwrap();
        for (a, b) in direct.iter().zip(cg.iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-9, max_relative = 1e-9);
        }
    }

    #[test]
    fn spd_report_bounds_rayleigh_by_min_depth() {
        let grid = PeriodicGrid::new(-150.0, 150.0, 120).unwrap();
        let ops = OperatorSet::upwind(grid, 2).unwrap();
        let h = ops
            .grid()
            .sample(|x| 1.0 + (-x * x / 400.0).exp() - 0.25 * (std::f64::consts::PI * x / 75.0).cos());
        let b = ops
            .grid()
            .sample(|x| 0.25 * (std::f64::consts::PI * x / 75.0).cos());
        let min_h = h.iter().cloned().fold(f64::INFINITY, f64::min);
        for op in [
            assemble_mild(&ops, &h, &b).unwrap(),
            assemble_full(&ops, &h, &b).unwrap(),
        ] {
            let report = verify_spd(&op, 20, 42);
            assert!(report.symmetry_residual <= 1e-13);
            assert!(
                report.min_rayleigh >= min_h * (1.0 - 1e-10),
                "rayleigh {} vs min h {}",
                report.min_rayleigh,
                min_h
            );
        }
    }

    #[test]
    fn rejects_nonpositive_depth_naming_the_node() {
        let grid = PeriodicGrid::new(0.0, 1.0, 16).unwrap();
        let ops = OperatorSet::central(grid, 2).unwrap();
        let mut h = Array1::from_elem(16, 1.0);
        h[7] = -0.25;
        match assemble_flat(&ops, &h) {
            Err(EllipticError::NonPositiveDepth { index, value }) => {
                assert_eq!(index, 7);
                assert_relative_eq!(value, -0.25);
            }
            other => panic!("expected NonPositiveDepth, got {other:?}"),
        }
    }

    #[test]
    fn solve_checks_dimensions() {
        let grid = PeriodicGrid::new(0.0, 1.0, 16).unwrap();
        let ops = OperatorSet::central(grid, 2).unwrap();
        let h = Array1::from_elem(16, 1.0);
        let op = assemble_flat(&ops, &h).unwrap();
        assert!(matches!(
            op.solve(&Array1::zeros(8)),
            Err(EllipticError::DimensionMismatch { .. })
        ));
    }
}
