//! Dense matrices and a truncated singular value decomposition for tall
//! least-squares problems.
//!
//! The SVD is computed as A = Q R (Householder) followed by one-sided Jacobi
//! on the small triangular factor, R = U_R Σ Vᵀ. Q is kept as reflectors, so
//! applying Uᵀ = U_Rᵀ Qᵀ to a vector costs O(MN).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{c, Real};

const JACOBI_MAX_SWEEPS: usize = 60;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} values for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Self { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// A x.
    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        self.data
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(|row| row.iter().zip(x).fold(T::zero(), |acc, (&a, &b)| acc + a * b))
            .collect()
    }

    /// Aᵀ y.
    pub fn tmatvec(&self, y: &[T]) -> Vec<T> {
        assert_eq!(y.len(), self.rows, "transposed matvec dimension mismatch");
        let mut out = vec![T::zero(); self.cols];
        for (row, &yi) in self.data.chunks(self.cols.max(1)).zip(y) {
            for (o, &a) in out.iter_mut().zip(row) {
                *o = *o + a * yi;
            }
        }
        out
    }

    /// A + α B.
    pub fn add_scaled(&self, alpha: T, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!("{}x{} plus {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + alpha * b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// Kronecker product K ⊗ A for a small dense K.
    pub fn kron_left(k: &[Vec<T>], a: &Self) -> Self {
        let m = k.len();
        let mut out = Self::zeros(m * a.rows, m * a.cols);
        for (bi, krow) in k.iter().enumerate() {
            for (bj, &kij) in krow.iter().enumerate() {
                if kij == T::zero() {
                    continue;
                }
                for i in 0..a.rows {
                    let src = a.row(i);
                    let dst = &mut out.row_mut(bi * a.rows + i)[bj * a.cols..(bj + 1) * a.cols];
                    for (d, &s) in dst.iter_mut().zip(src) {
                        *d = *d + kij * s;
                    }
                }
            }
        }
        out
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm2<T: Real>(a: &[T]) -> T {
    // scaled to avoid overflow
    let scale = norm_inf(a);
    if scale == T::zero() || !scale.is_finite() {
        return scale;
    }
    let ss = a.iter().fold(T::zero(), |acc, &x| {
        let y = x / scale;
        acc + y * y
    });
    scale * ss.sqrt()
}

pub fn norm_inf<T: Real>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
}

/// Thin SVD of a tall matrix, A = U Σ Vᵀ with U = Q U_R implicit.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    m: usize,
    n: usize,
    // Householder vectors, column-major (column k has entries k..m).
    reflectors: Vec<Vec<T>>,
    taus: Vec<T>,
    // N×N factors, stored as columns.
    u_r: Vec<Vec<T>>,
    v: Vec<Vec<T>>,
    sigma: Vec<T>,
}

impl<T: Real> Svd<T> {
    /// Factorizes an M×N matrix with M ≥ N.
    pub fn new(a: &Matrix<T>) -> Result<Self> {
        let (m, n) = (a.rows(), a.cols());
        if m < n {
            return Err(Error::Shape(format!("SVD needs rows >= cols, got {m}x{n}")));
        }
        if a.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::Svd(0));
        }
        let mut cols: Vec<Vec<T>> = (0..n).map(|j| a.column(j)).collect();
        let mut reflectors = Vec::with_capacity(n);
        let mut taus = Vec::with_capacity(n);
        for k in 0..n {
            let (v, tau, alpha) = householder(&cols[k][k..]);
            cols[k][k] = alpha;
            for x in cols[k][k + 1..].iter_mut() {
                *x = T::zero();
            }
            if tau != T::zero() {
                cols[k + 1..].par_iter_mut().for_each(|col| {
                    let tail = &mut col[k..];
                    let w = tau * dot(&v, tail);
                    for (t, &vi) in tail.iter_mut().zip(&v) {
                        *t = *t - w * vi;
                    }
                });
            }
            reflectors.push(v);
            taus.push(tau);
        }
        // R as columns of length n
        let r: Vec<Vec<T>> = cols
            .into_iter()
            .map(|mut col| {
                col.truncate(n);
                col
            })
            .collect();
        let (u_r, sigma, v) = one_sided_jacobi(r)?;
        Ok(Self { m, n, reflectors, taus, u_r, v, sigma })
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    /// Singular values in nonincreasing order.
    pub fn singular_values(&self) -> &[T] {
        &self.sigma
    }

    /// Right singular vector k.
    pub fn right_vector(&self, k: usize) -> &[T] {
        &self.v[k]
    }

    /// Uᵀ y.
    pub fn ut_apply(&self, y: &[T]) -> Vec<T> {
        assert_eq!(y.len(), self.m, "right-hand side length mismatch");
        let mut w = y.to_vec();
        for (k, (v, &tau)) in self.reflectors.iter().zip(&self.taus).enumerate() {
            if tau == T::zero() {
                continue;
            }
            let tail = &mut w[k..];
            let s = tau * dot(v, tail);
            for (t, &vi) in tail.iter_mut().zip(v) {
                *t = *t - s * vi;
            }
        }
        let qty = &w[..self.n];
        self.u_r.iter().map(|u| dot(u, qty)).collect()
    }

    /// Number of singular values ≥ `cutoff`.
    pub fn rank_at(&self, cutoff: T) -> usize {
        self.sigma.iter().take_while(|&&s| s >= cutoff).count()
    }

    /// x = V_ε Σ_ε⁻¹ U_εᵀ y keeping singular values ≥ `cutoff`; also returns
    /// the kept rank.
    pub fn solve(&self, y: &[T], cutoff: T) -> (Vec<T>, usize) {
        let rank = self.rank_at(cutoff);
        let uty = self.ut_apply(y);
        let mut x = vec![T::zero(); self.n];
        for ((&u, &sigma), v) in uty.iter().zip(&self.sigma).zip(&self.v).take(rank) {
            let coef = u / sigma;
            for (xi, &vi) in x.iter_mut().zip(v) {
                *xi = *xi + coef * vi;
            }
        }
        (x, rank)
    }
}

/// Householder vector for x: returns (v with v[0] = 1, τ, β) such that
/// (I − τ v vᵀ) x = β e₁.
fn householder<T: Real>(x: &[T]) -> (Vec<T>, T, T) {
    let mut v = x.to_vec();
    let alpha = x[0];
    let tail_norm = norm2(&x[1..]);
    if tail_norm == T::zero() {
        v[0] = T::one();
        return (v, T::zero(), alpha);
    }
    let norm = alpha.hypot(tail_norm);
    let beta = if alpha >= T::zero() { -norm } else { norm };
    let v0 = alpha - beta;
    for vi in v[1..].iter_mut() {
        *vi = *vi / v0;
    }
    v[0] = T::one();
    let tau = (beta - alpha) / beta;
    (v, tau, beta)
}

/// One-sided (Hestenes) Jacobi SVD of a square matrix given by columns.
/// Returns (U columns, σ descending, V columns).
#[allow(clippy::type_complexity)]
fn one_sided_jacobi<T: Real>(mut g: Vec<Vec<T>>) -> Result<(Vec<Vec<T>>, Vec<T>, Vec<Vec<T>>)> {
    let n = g.len();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            e
        })
        .collect();
    let tol = T::epsilon() * c::<T>(n.max(1) as f64).sqrt();
    let mut norms: Vec<T> = g.iter().map(|col| dot(col, col)).collect();
    // Columns below ε‖A‖_F are rounding noise: rotating against them never
    // meets the relative test once a column has been annihilated.
    let frob2 = norms.iter().fold(T::zero(), |acc, &x| acc + x);
    let negligible = T::epsilon() * T::epsilon() * frob2;
    let mut converged = n < 2;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let gamma = dot(&g[p], &g[q]);
                if gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (c::<T>(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                let (gp, gq) = pair_mut(&mut g, p, q);
                rotate(gp, gq, cs, sn);
                let (vp, vq) = pair_mut(&mut v, p, q);
                rotate(vp, vq, cs, sn);
                norms[p] = dot(&g[p], &g[p]);
                norms[q] = dot(&g[q], &g[q]);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Svd(JACOBI_MAX_SWEEPS));
    }
    let mut sigma: Vec<T> = g.iter().map(|col| norm2(col)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap_or(std::cmp::Ordering::Equal).then(i.cmp(&j)));
    let mut u = Vec::with_capacity(n);
    let mut vv = Vec::with_capacity(n);
    for &k in &order {
        let s = sigma[k];
        let col = if s > T::zero() { g[k].iter().map(|&x| x / s).collect() } else { vec![T::zero(); n] };
        u.push(col);
        vv.push(v[k].clone());
    }
    sigma = order.iter().map(|&k| sigma[k]).collect();
    Ok((u, sigma, vv))
}

fn pair_mut<T>(v: &mut [Vec<T>], p: usize, q: usize) -> (&mut Vec<T>, &mut Vec<T>) {
    debug_assert!(p < q);
    let (lo, hi) = v.split_at_mut(q);
    (&mut lo[p], &mut hi[0])
}

fn rotate<T: Real>(x: &mut [T], y: &mut [T], cs: T, sn: T) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (xa, yb) = (*a, *b);
        *a = cs * xa - sn * yb;
        *b = sn * xa + cs * yb;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn hilbert_like(m: usize, n: usize) -> Matrix<f64> {
        let mut a = Matrix::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                a[(i, j)] = 1.0 / (i as f64 + j as f64 + 1.0) + if i == j { 0.5 } else { 0.0 };
            }
        }
        a
    }

    #[test]
    fn reconstructs_matrix() {
        let a = hilbert_like(9, 5);
        let svd = Svd::new(&a).unwrap();
        // columns of A from U Σ Vᵀ: apply to unit vectors via A e_j = U Σ Vᵀ e_j
        // check Uᵀ A v_k = σ_k e_k instead
        for k in 0..5 {
            let av = a.matvec(svd.right_vector(k));
            let u_t = svd.ut_apply(&av);
            for (i, &x) in u_t.iter().enumerate() {
                let expect = if i == k { svd.singular_values()[k] } else { 0.0 };
                assert!((x - expect).abs() < 1e-13, "{i} {k} {x} {expect}");
            }
        }
        assert!(svd.singular_values().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn least_squares_solution() {
        let a = hilbert_like(12, 4);
        let x_true = vec![1.0, -2.0, 0.5, 3.0];
        let y = a.matvec(&x_true);
        let svd = Svd::new(&a).unwrap();
        let (x, rank) = svd.solve(&y, 1e-14);
        assert_eq!(rank, 4);
        for (a, b) in x.iter().zip(&x_true) {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn duplicated_columns_are_truncated() {
        let base = hilbert_like(10, 3);
        let mut a = Matrix::zeros(10, 4);
        for i in 0..10 {
            for j in 0..3 {
                a[(i, j)] = base[(i, j)];
            }
            a[(i, 3)] = base[(i, 0)];
        }
        let svd = Svd::new(&a).unwrap();
        assert!(svd.singular_values()[3] < 1e-14);
        assert_eq!(svd.rank_at(1e-10), 3);
    }

    #[test]
    fn kronecker_blocks() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let k = vec![vec![1.0, 0.5], vec![0.0, 2.0]];
        let kr = Matrix::kron_left(&k, &a);
        assert_eq!(kr[(0, 3)], 1.0);
        assert_eq!(kr[(3, 3)], 8.0);
        assert_eq!(kr[(2, 0)], 0.0);
    }

    #[test]
    fn tall_only() {
        assert!(Svd::new(&Matrix::<f64>::zeros(2, 3)).is_err());
    }
}
