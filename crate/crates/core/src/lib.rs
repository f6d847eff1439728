//! Frame-based spectral solvers for equations of the form
//! Σ λₖ (−Δ)^{sₖ} u = f on ℝ and ℝ², and for the fractional heat equation.
//!
//! A solution is written in a sum space of weighted Jacobi (or Zernike)
//! polynomials and their fractional-Laplacian images, the *extended*
//! functions, which carry the algebraic tails. The operator maps that space
//! onto a known space, so f is expanded there by least squares on a
//! collocation grid and u is read off from the same coefficients.
//!
//! - [`specfun`]: Γ, ₂F₁, ₁F₁ and Gauss quadrature.
//! - [`basis1d`], [`basis2d`]: the basis functions themselves.
//! - [`frame`]: sum spaces, operator images, grids and the truncated-SVD
//!   least-squares solve.
//! - [`solver`]: stationary problems.
//! - [`timestep`]: implicit Runge–Kutta stepping.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below
//! name the common instantiations.
//!
//! ```
//! use fracframes::basis1d::Interval;
//! use fracframes::frame::{collocation_grid_1d, BasisFamily, Cutoff, OperatorSpec, Point, SumSpace};
//! use fracframes::solver::{rhs_gaussian_1d, solve_stationary, Rhs};
//!
//! let s = 1.0 / 3.0;
//! let ivs: Vec<_> = [-3.0, -1.0, 1.0].iter().map(|&a| Interval::new(a, a + 2.0).unwrap()).collect();
//! let mut families: Vec<_> = ivs.iter().map(|iv| BasisFamily::extended_jacobi(-s, -s, *iv, 0).unwrap()).collect();
//! families.extend(ivs.iter().map(|iv| BasisFamily::weighted_jacobi(s, *iv).unwrap()));
//! let space = SumSpace::new(families, 90).unwrap();
//! let pads = (Interval::new(-10.0, -3.0).unwrap(), Interval::new(3.0, 10.0).unwrap());
//! let points = collocation_grid_1d(&ivs, 101, 1e-2, Some(pads)).unwrap();
//! let f = |p: Point<f64>| match p {
//!     Point::D1(x) => rhs_gaussian_1d(s, x).unwrap(),
//!     Point::D2(..) => unreachable!(),
//! };
//! let op = OperatorSpec::identity_plus(s);
//! let sol = solve_stationary(&op, Rhs::Function(&f), &space, &points, Cutoff::default()).unwrap();
//! let u0 = sol.evaluate(Point::D1(0.0)).unwrap();
//! assert!((u0 - 1.0).abs() < 1e-6);
//! ```

// Negated comparisons (`!(x > 0)`) are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis1d;
pub mod basis2d;
pub mod error;
pub mod frame;
pub mod linalg;
pub mod scalar;
pub mod solver;
pub mod specfun;
pub mod timestep;

pub use error::{Error, Result};
pub use scalar::Real;

pub type SumSpace64 = frame::SumSpace<f64>;
pub type SumSpace32 = frame::SumSpace<f32>;
pub type Solution64 = solver::Solution<f64>;
pub type Solution32 = solver::Solution<f32>;
pub type LsSystem64 = frame::LsSystem<f64>;
pub type LsSystem32 = frame::LsSystem<f32>;
pub type Point64 = frame::Point<f64>;
pub type Point32 = frame::Point<f32>;
pub type Tableau64 = timestep::ButcherTableau<f64>;
pub type Tableau32 = timestep::ButcherTableau<f32>;

/// Version of this crate.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
