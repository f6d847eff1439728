//! Stationary problems 𝓛u = f: expand f in the image of a sum space and
//! read the solution off the same coefficients.

use crate::error::{Error, Result};
use crate::frame::{assemble, operator_image, tsvd_solve, Cutoff, LsSystem, OperatorSpec, Point, SumSpace};
use crate::linalg::norm_inf;
use crate::scalar::{c, Real};
use crate::specfun::{gamma, hyp1f1};

/// Right-hand side given as a function or as samples on the grid.
pub enum Rhs<'a, T> {
    Function(&'a (dyn Fn(Point<T>) -> T + Sync)),
    Samples(&'a [T]),
}

impl<T: Real> Rhs<'_, T> {
    pub fn sample(&self, points: &[Point<T>]) -> Result<Vec<T>> {
        match self {
            Rhs::Function(f) => Ok(points.iter().map(|&p| f(p)).collect()),
            Rhs::Samples(s) => {
                if s.len() != points.len() {
                    return Err(Error::Shape(format!("{} samples for {} points", s.len(), points.len())));
                }
                Ok(s.to_vec())
            }
        }
    }
}

/// Fit quality of a solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics<T> {
    /// ‖(𝓛S)u − f‖₂ over the collocation points.
    pub residual: T,
    /// ‖(𝓛S)u − f‖_∞ over the collocation points.
    pub rhs_linf_error: T,
    pub coeff_inf_norm: T,
    pub kept_rank: usize,
}

/// Coefficients of u in a sum space.
#[derive(Debug, Clone)]
pub struct Solution<T> {
    pub space: SumSpace<T>,
    pub coeffs: Vec<T>,
    pub diagnostics: Diagnostics<T>,
}

impl<T: Real> Solution<T> {
    /// u(x) = S(x) · coeffs.
    pub fn evaluate(&self, point: Point<T>) -> Result<T> {
        self.space.evaluate(&self.coeffs, point)
    }

    pub fn evaluate_many(&self, points: &[Point<T>]) -> Result<Vec<T>> {
        let system = assemble(&self.space.as_image(), points)?;
        Ok(system.matrix.matvec(&self.coeffs))
    }
}

/// u(x) for a solution.
pub fn evaluate<T: Real>(sol: &Solution<T>, point: Point<T>) -> Result<T> {
    sol.evaluate(point)
}

/// Solves 𝓛u = f by least squares on the collocation points.
pub fn solve_stationary<T: Real>(
    op: &OperatorSpec<T>,
    f: Rhs<'_, T>,
    space: &SumSpace<T>,
    points: &[Point<T>],
    cutoff: Cutoff<T>,
) -> Result<Solution<T>> {
    let image = operator_image(space, op)?;
    let system = assemble(&image, points)?;
    let samples = f.sample(points)?;
    solve_with_system(&system, &samples, cutoff)
}

/// Same as [`solve_stationary`] on an already assembled image system.
pub fn solve_with_system<T: Real>(system: &LsSystem<T>, samples: &[T], cutoff: Cutoff<T>) -> Result<Solution<T>> {
    let fit = tsvd_solve(system, samples, cutoff)?;
    let recon = system.matrix.matvec(&fit.coeffs);
    let err: Vec<T> = recon.iter().zip(samples).map(|(&a, &b)| a - b).collect();
    Ok(Solution {
        space: system.image.space().clone(),
        diagnostics: Diagnostics {
            residual: fit.residual,
            rhs_linf_error: norm_inf(&err),
            coeff_inf_norm: fit.coeff_inf_norm,
            kept_rank: fit.kept_rank,
        },
        coeffs: fit.coeffs,
    })
}

/// (I + (−Δ)^s) e^{−x²} = e^{−x²} + 4^s Γ(s + 1/2)/√π ₁F₁(s + 1/2; 1/2; −x²).
pub fn rhs_gaussian_1d<T: Real>(s: T, x: T) -> Result<T> {
    Ok((-x * x).exp() + frac_lap_gaussian_1d(s, x)?)
}

/// (−Δ)^s e^{−x²} on ℝ.
pub fn frac_lap_gaussian_1d<T: Real>(s: T, x: T) -> Result<T> {
    let half = c::<T>(0.5);
    let pre = c::<T>(4.0).powf(s) * gamma(s + half)? / T::PI().sqrt();
    Ok(pre * hyp1f1(s + half, half, -x * x)?)
}

/// (−Δ)^{1/2} e^{−x²−y²} = 2Γ(3/2) ₁F₁(3/2; 1; −x² − y²) on ℝ².
pub fn rhs_gaussian_2d<T: Real>(x: T, y: T) -> Result<T> {
    let three_halves = c::<T>(1.5);
    Ok(c::<T>(2.0) * gamma(three_halves)? * hyp1f1(three_halves, T::one(), -(x * x + y * y))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rhs_at_origin() {
        let s = 0.3;
        let expect = 1.0 + 4f64.powf(s) * gamma(s + 0.5).unwrap() / std::f64::consts::PI.sqrt();
        assert_relative_eq!(rhs_gaussian_1d(s, 0.0).unwrap(), expect, max_relative = 1e-15);
        assert_relative_eq!(rhs_gaussian_2d(0.0, 0.0).unwrap(), std::f64::consts::PI.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(
            rhs_gaussian_2d(0.3, 0.4).unwrap(),
            rhs_gaussian_2d(0.5, 0.0).unwrap(),
            max_relative = 1e-14
        );
    }
}
