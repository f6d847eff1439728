use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{norm2, norm_inf, Matrix, Svd};
use crate::scalar::{c, Real};

use super::family::Point;
use super::space::{operator_image, OperatorImage, OperatorSpec, SumSpace};

/// Recommended ratio of collocation points to columns.
pub const MIN_OVERSAMPLING: usize = 4;

/// Default relative truncation level of the SVD.
pub const DEFAULT_RELATIVE_CUTOFF: f64 = 1e-14;

/// Where to cut the singular values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff<T> {
    /// Keep σ ≥ ε.
    Absolute(T),
    /// Keep σ ≥ ε · σ_max.
    Relative(T),
}

impl<T: Real> Default for Cutoff<T> {
    fn default() -> Self {
        Cutoff::Relative(c(DEFAULT_RELATIVE_CUTOFF))
    }
}

impl<T: Real> Cutoff<T> {
    pub fn threshold(&self, sigma_max: T) -> T {
        match *self {
            Cutoff::Absolute(eps) => eps,
            Cutoff::Relative(eps) => eps * sigma_max,
        }
    }
}

/// Collocation matrix of an operator image together with its lazily
/// computed SVD.
#[derive(Debug)]
pub struct LsSystem<T> {
    pub matrix: Matrix<T>,
    pub points: Vec<Point<T>>,
    pub image: OperatorImage<T>,
    svd: OnceLock<Svd<T>>,
}

impl<T: Real> LsSystem<T> {
    /// Wraps an already assembled matrix.
    pub fn from_parts(matrix: Matrix<T>, points: Vec<Point<T>>, image: OperatorImage<T>) -> Result<Self> {
        if matrix.rows() != points.len() || matrix.cols() != image.space().len() {
            return Err(Error::Shape(format!(
                "{}x{} matrix for {} points and {} columns",
                matrix.rows(),
                matrix.cols(),
                points.len(),
                image.space().len()
            )));
        }
        Ok(Self { matrix, points, image, svd: OnceLock::new() })
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// The system restricted to its first `n` columns (the columns of a sum
    /// space form nested prefixes, so no re-evaluation is needed).
    pub fn truncated(&self, n: usize) -> Result<Self> {
        let n = n.min(self.cols());
        let mut data = Vec::with_capacity(self.rows() * n);
        for i in 0..self.rows() {
            data.extend_from_slice(&self.matrix.row(i)[..n]);
        }
        Self::from_parts(Matrix::from_row_major(self.rows(), n, data)?, self.points.clone(), self.image.truncated(n))
    }

    /// The SVD, computed on first use.
    pub fn svd(&self) -> Result<&Svd<T>> {
        if let Some(s) = self.svd.get() {
            return Ok(s);
        }
        let s = Svd::new(&self.matrix)?;
        Ok(self.svd.get_or_init(|| s))
    }
}

/// Evaluates every image column at every point (rows in parallel).
pub fn assemble<T: Real>(image: &OperatorImage<T>, points: &[Point<T>]) -> Result<LsSystem<T>> {
    let space = image.space();
    let (m, n) = (points.len(), space.len());
    if m < n {
        return Err(Error::Shape(format!("{m} points cannot determine {n} columns")));
    }
    if m < MIN_OVERSAMPLING * n {
        log::warn!("only {m} collocation points for {n} columns (fewer than {MIN_OVERSAMPLING}x oversampling)");
    }
    let lookup = space.column_lookup();
    let mut data = vec![T::zero(); m * n];
    if n > 0 {
        data.par_chunks_mut(n).zip(points.par_iter()).enumerate().try_for_each(|(i, (row, &p))| {
            image.eval_row(p, &lookup, row).map_err(|e| match e {
                Error::Assembly { column, source, .. } => Error::Assembly { point: i, column, source },
                other => Error::Assembly { point: i, column: 0, source: Box::new(other) },
            })
        })?;
    }
    LsSystem::from_parts(Matrix::from_row_major(m, n, data)?, points.to_vec(), image.clone())
}

/// Result of a truncated SVD solve.
#[derive(Debug, Clone, PartialEq)]
pub struct TsvdSolution<T> {
    pub coeffs: Vec<T>,
    pub kept_rank: usize,
    /// ‖X u − y‖₂.
    pub residual: T,
    /// ‖u‖_∞.
    pub coeff_inf_norm: T,
    /// Singular value threshold actually used.
    pub threshold: T,
    /// Set when every singular value fell below the threshold.
    pub all_truncated: bool,
}

/// u_ε = V_ε Σ_ε⁻¹ U_εᵀ y.
pub fn tsvd_solve<T: Real>(system: &LsSystem<T>, y: &[T], cutoff: Cutoff<T>) -> Result<TsvdSolution<T>> {
    if y.len() != system.rows() {
        return Err(Error::Shape(format!("{} samples for {} rows", y.len(), system.rows())));
    }
    let svd = system.svd()?;
    let sigma_max = svd.singular_values().first().copied().unwrap_or_else(T::zero);
    let threshold = cutoff.threshold(sigma_max);
    let (coeffs, kept_rank) = svd.solve(y, threshold);
    let all_truncated = kept_rank == 0 && system.cols() > 0;
    if all_truncated {
        log::warn!("all singular values fell below {}; returning zero coefficients", threshold.as_f64());
    }
    let fit = system.matrix.matvec(&coeffs);
    let diff: Vec<T> = fit.iter().zip(y).map(|(&a, &b)| a - b).collect();
    Ok(TsvdSolution {
        residual: norm2(&diff),
        coeff_inf_norm: norm_inf(&coeffs),
        coeffs,
        kept_rank,
        threshold,
        all_truncated,
    })
}

/// Expands samples of f in the image of `space` under `op`: f ≈ (𝓛S)u.
pub fn expand<T: Real>(
    space: &SumSpace<T>,
    op: &OperatorSpec<T>,
    f_samples: &[T],
    points: &[Point<T>],
    cutoff: Cutoff<T>,
) -> Result<(TsvdSolution<T>, LsSystem<T>)> {
    let image = operator_image(space, op)?;
    let system = assemble(&image, points)?;
    let sol = tsvd_solve(&system, f_samples, cutoff)?;
    Ok((sol, system))
}
