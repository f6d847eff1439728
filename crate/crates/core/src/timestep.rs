//! Implicit Runge–Kutta stepping for ∂ₜu + (−Δ)^{s(t)} u = 0 in coefficient
//! space.
//!
//! With X the collocation matrix of the sum space and X_* that of its image
//! under (−Δ)^s, the stage vectors solve the stacked least-squares problem
//!
//! ```text
//! (I_m ⊗ X + δt (A ⊗ X_*)) k = −(X_* u; …; X_* u)
//! ```
//!
//! and the update is u ← u + δt Σ bᵢ kᵢ.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::frame::{assemble, operator_image, Cutoff, OperatorSpec, Point, SumSpace};
use crate::linalg::{norm_inf, Matrix, Svd};
use crate::scalar::{c, Real};

/// Coefficients (A, b, c) of an implicit Runge–Kutta method.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau<T> {
    pub a: Vec<Vec<T>>,
    pub b: Vec<T>,
    pub c: Vec<T>,
    pub order: usize,
}

impl<T: Real> ButcherTableau<T> {
    /// Validates shapes and the order conditions up to `order`.
    pub fn new(a: Vec<Vec<T>>, b: Vec<T>, c: Vec<T>, order: usize) -> Result<Self> {
        let m = b.len();
        if m == 0 || c.len() != m || a.len() != m || a.iter().any(|r| r.len() != m) {
            return Err(Error::Tableau("inconsistent tableau shapes".into()));
        }
        let tab = Self { a, b, c, order };
        let worst = tab.order_defect();
        let tol = crate::scalar::c::<T>(1e-12).max(T::epsilon() * crate::scalar::c(64.0));
        if worst > tol {
            return Err(Error::Tableau(format!("order-{order} conditions fail by {:e}", worst.as_f64())));
        }
        Ok(tab)
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// Largest violation among: Σbᵢ = 1, cᵢ = Σⱼ Aᵢⱼ, Σ bᵢcᵢ^{k−1} = 1/k for
    /// k ≤ order, and Σ bᵢAᵢⱼcⱼ = 1/6 when order ≥ 3.
    pub fn order_defect(&self) -> T {
        let mut worst = T::zero();
        for (row, &ci) in self.a.iter().zip(&self.c) {
            let sum: T = row.iter().copied().sum();
            worst = worst.max((sum - ci).abs());
        }
        for k in 1..=self.order.max(1) {
            let q: T = self.b.iter().zip(&self.c).map(|(&b, &ci)| b * ci.powi(k as i32 - 1)).sum();
            worst = worst.max((q - T::one() / T::of(k)).abs());
        }
        if self.order >= 3 {
            let mut acc = T::zero();
            for (i, row) in self.a.iter().enumerate() {
                for (j, &aij) in row.iter().enumerate() {
                    acc = acc + self.b[i] * aij * self.c[j];
                }
            }
            worst = worst.max((acc - T::one() / c(6.0)).abs());
        }
        worst
    }
}

/// The shipped methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    BackwardEuler,
    ImplicitMidpoint,
    GaussLegendre4,
    GaussLegendre6,
}

impl Method {
    pub const ALL: [Method; 4] =
        [Method::BackwardEuler, Method::ImplicitMidpoint, Method::GaussLegendre4, Method::GaussLegendre6];

    pub fn name(&self) -> &'static str {
        match self {
            Method::BackwardEuler => "backward-euler",
            Method::ImplicitMidpoint => "implicit-midpoint",
            Method::GaussLegendre4 => "gauss-legendre-4",
            Method::GaussLegendre6 => "gauss-legendre-6",
        }
    }

    pub fn tableau<T: Real>(&self) -> ButcherTableau<T> {
        let f = |x: f64| c::<T>(x);
        let (a, b, cc, order) = match self {
            Method::BackwardEuler => (vec![vec![1.0]], vec![1.0], vec![1.0], 1),
            Method::ImplicitMidpoint => (vec![vec![0.5]], vec![1.0], vec![0.5], 2),
            Method::GaussLegendre4 => {
                let r = 3f64.sqrt() / 6.0;
                (vec![vec![0.25, 0.25 - r], vec![0.25 + r, 0.25]], vec![0.5, 0.5], vec![0.5 - r, 0.5 + r], 4)
            }
            Method::GaussLegendre6 => {
                let r = 15f64.sqrt();
                (
                    vec![
                        vec![5.0 / 36.0, 2.0 / 9.0 - r / 15.0, 5.0 / 36.0 - r / 30.0],
                        vec![5.0 / 36.0 + r / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r / 24.0],
                        vec![5.0 / 36.0 + r / 30.0, 2.0 / 9.0 + r / 15.0, 5.0 / 36.0],
                    ],
                    vec![5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0],
                    vec![0.5 - r / 10.0, 0.5, 0.5 + r / 10.0],
                    6,
                )
            }
        };
        ButcherTableau {
            a: a.into_iter().map(|row| row.into_iter().map(f).collect()).collect(),
            b: b.into_iter().map(f).collect(),
            c: cc.into_iter().map(f).collect(),
            order,
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| Error::UnknownTableau(s.to_string()))
    }
}

/// Tableau by name: backward-euler, implicit-midpoint, gauss-legendre-4 or
/// gauss-legendre-6.
pub fn tableau<T: Real>(name: &str) -> Result<ButcherTableau<T>> {
    let tab = name.parse::<Method>()?.tableau();
    ButcherTableau::new(tab.a, tab.b, tab.c, tab.order)
}

/// Solution coefficients at time t.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeState<T> {
    pub t: T,
    pub coeffs: Vec<T>,
    pub space: SumSpace<T>,
}

impl<T: Real> TimeState<T> {
    pub fn new(t: T, coeffs: Vec<T>, space: SumSpace<T>) -> Result<Self> {
        if coeffs.len() != space.len() {
            return Err(Error::Shape(format!("{} coefficients for {} columns", coeffs.len(), space.len())));
        }
        Ok(Self { t, coeffs, space })
    }
}

/// Per-step record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics<T> {
    pub t: T,
    pub coeff_inf_norm: T,
    pub kept_rank: usize,
}

/// One method at one step size with its factored stage matrix.
#[derive(Debug)]
pub struct RkStepper<'a, T> {
    tab: &'a ButcherTableau<T>,
    dt: T,
    x_star: &'a Matrix<T>,
    svd: Svd<T>,
    threshold: T,
}

impl<'a, T: Real> RkStepper<'a, T> {
    /// Builds X_A = I_m ⊗ X + δt (A ⊗ X_*) and factors it.
    pub fn new(
        tab: &'a ButcherTableau<T>,
        dt: T,
        x: &Matrix<T>,
        x_star: &'a Matrix<T>,
        cutoff: Cutoff<T>,
    ) -> Result<Self> {
        let xa = stage_matrix(tab, dt, x, x_star)?;
        let svd = Svd::new(&xa)?;
        let threshold = cutoff.threshold(svd.singular_values().first().copied().unwrap_or_else(T::zero));
        Ok(Self { tab, dt, x_star, svd, threshold })
    }

    /// Advances one step.
    pub fn step(&self, state: &TimeState<T>) -> Result<(TimeState<T>, StepDiagnostics<T>)> {
        let n = self.x_star.cols();
        if state.coeffs.len() != n {
            return Err(Error::Shape(format!("{} coefficients for {n} columns", state.coeffs.len())));
        }
        let m = self.tab.stages();
        let y: Vec<T> = self.x_star.matvec(&state.coeffs).into_iter().map(|v| -v).collect();
        let mut rhs = Vec::with_capacity(m * y.len());
        for _ in 0..m {
            rhs.extend_from_slice(&y);
        }
        let (k, kept_rank) = self.svd.solve(&rhs, self.threshold);
        let mut coeffs = state.coeffs.clone();
        for (i, &bi) in self.tab.b.iter().enumerate() {
            let w = self.dt * bi;
            for (u, &ki) in coeffs.iter_mut().zip(&k[i * n..(i + 1) * n]) {
                *u = *u + w * ki;
            }
        }
        let t = state.t + self.dt;
        let diag = StepDiagnostics { t, coeff_inf_norm: norm_inf(&coeffs), kept_rank };
        Ok((TimeState { t, coeffs, space: state.space.clone() }, diag))
    }
}

/// I_m ⊗ X + δt (A ⊗ X_*).
pub fn stage_matrix<T: Real>(tab: &ButcherTableau<T>, dt: T, x: &Matrix<T>, x_star: &Matrix<T>) -> Result<Matrix<T>> {
    if x.rows() != x_star.rows() || x.cols() != x_star.cols() {
        return Err(Error::Shape(format!(
            "X is {}x{} but X_* is {}x{}",
            x.rows(),
            x.cols(),
            x_star.rows(),
            x_star.cols()
        )));
    }
    let m = tab.stages();
    let eye: Vec<Vec<T>> =
        (0..m).map(|i| (0..m).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect();
    let scaled: Vec<Vec<T>> = tab.a.iter().map(|row| row.iter().map(|&v| dt * v).collect()).collect();
    Matrix::kron_left(&eye, x).add_scaled(T::one(), &Matrix::kron_left(&scaled, x_star))
}

/// One step of the method without keeping the factorization.
pub fn rk_step<T: Real>(
    state: &TimeState<T>,
    tab: &ButcherTableau<T>,
    dt: T,
    x: &Matrix<T>,
    x_star: &Matrix<T>,
    cutoff: Cutoff<T>,
) -> Result<TimeState<T>> {
    Ok(RkStepper::new(tab, dt, x, x_star, cutoff)?.step(state)?.0)
}

/// States and per-step diagnostics of a run.
#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    /// The initial state followed by every step (or only the last one when
    /// snapshots are off).
    pub states: Vec<TimeState<T>>,
    pub steps: Vec<StepDiagnostics<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn last(&self) -> &TimeState<T> {
        self.states.last().expect("trajectory holds the initial state")
    }
}

/// Number of steps of size dt covering [t0, t_end].
pub fn step_count<T: Real>(t0: T, t_end: T, dt: T) -> Result<usize> {
    if !(dt > T::zero()) || t_end < t0 {
        return Err(Error::InvalidParameter(format!(
            "cannot step from {} to {} with dt = {}",
            t0.as_f64(),
            t_end.as_f64(),
            dt.as_f64()
        )));
    }
    let horizon = t_end - t0;
    let j = (horizon / dt).round();
    let tol = c::<T>(1e-12).max(T::epsilon() * c(16.0)) * horizon.max(T::one());
    if (j * dt - horizon).abs() > tol {
        return Err(Error::InvalidParameter(format!(
            "dt = {} does not divide the horizon {}",
            dt.as_f64(),
            horizon.as_f64()
        )));
    }
    j.to_usize().ok_or_else(|| Error::InvalidParameter("step count overflow".into()))
}

/// Repeated steps with a single factorization of the stage matrix.
#[allow(clippy::too_many_arguments)]
pub fn integrate<T: Real>(
    init: TimeState<T>,
    tab: &ButcherTableau<T>,
    dt: T,
    t_end: T,
    x: &Matrix<T>,
    x_star: &Matrix<T>,
    cutoff: Cutoff<T>,
    keep_snapshots: bool,
) -> Result<Trajectory<T>> {
    let steps = step_count(init.t, t_end, dt)?;
    let mut traj = Trajectory { states: vec![init], steps: Vec::with_capacity(steps) };
    if steps == 0 {
        return Ok(traj);
    }
    let stepper = RkStepper::new(tab, dt, x, x_star, cutoff)?;
    let t0 = traj.states[0].t;
    for j in 1..=steps {
        let (mut next, diag) = stepper.step(traj.last())?;
        // avoid drift in t from repeated addition
        next.t = t0 + dt * T::of(j);
        traj.steps.push(StepDiagnostics { t: next.t, ..diag });
        if !keep_snapshots && traj.states.len() > 1 {
            traj.states.pop();
        }
        traj.states.push(next);
    }
    Ok(traj)
}

/// Builds the sum space for exponent s (the grid stays fixed).
pub type SpaceFactory<'a, T> = dyn Fn(T) -> Result<SumSpace<T>> + 'a;

/// Steps ∂ₜu + (−Δ)^{s(t)} u = 0 rebuilding the space at every step.
///
/// Before step n the previous solution is re-expanded from its point values
/// in the space for s(tₙ); all stages of that step use s(tₙ).
#[allow(clippy::too_many_arguments)]
pub fn integrate_variable_s<T: Real>(
    init: TimeState<T>,
    tab: &ButcherTableau<T>,
    dt: T,
    t_end: T,
    s_of_t: &dyn Fn(T) -> T,
    rebuild: &SpaceFactory<'_, T>,
    points: &[Point<T>],
    cutoff: Cutoff<T>,
    keep_snapshots: bool,
) -> Result<Trajectory<T>> {
    let steps = step_count(init.t, t_end, dt)?;
    let t0 = init.t;
    let mut values = assemble(&init.space.as_image(), points)?.matrix.matvec(&init.coeffs);
    let mut traj = Trajectory { states: vec![init], steps: Vec::with_capacity(steps) };
    for j in 0..steps {
        let tn = t0 + dt * T::of(j);
        let s = s_of_t(tn);
        let space = rebuild(s)?;
        let x_sys = assemble(&space.as_image(), points)?;
        let x_star = assemble(&operator_image(&space, &OperatorSpec::fractional(s))?, points)?.matrix;
        let transfer = crate::frame::tsvd_solve(&x_sys, &values, cutoff)?;
        let state = TimeState { t: tn, coeffs: transfer.coeffs, space };
        let stepper = RkStepper::new(tab, dt, &x_sys.matrix, &x_star, cutoff)?;
        let (mut next, diag) = stepper.step(&state)?;
        next.t = t0 + dt * T::of(j + 1);
        values = x_sys.matrix.matvec(&next.coeffs);
        traj.steps.push(StepDiagnostics { t: next.t, ..diag });
        if !keep_snapshots && traj.states.len() > 1 {
            traj.states.pop();
        }
        traj.states.push(next);
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_tableaus_pass_order_conditions() {
        for m in Method::ALL {
            let tab: ButcherTableau<f64> = tableau(m.name()).unwrap();
            assert!(tab.order_defect() <= 1e-12, "{}", m.name());
        }
        let be: ButcherTableau<f64> = tableau("backward-euler").unwrap();
        assert_eq!((be.a[0][0], be.b[0], be.c[0], be.order), (1.0, 1.0, 1.0, 1));
        let mid: ButcherTableau<f64> = tableau("implicit-midpoint").unwrap();
        assert_eq!((mid.a[0][0], mid.b[0], mid.c[0], mid.order), (0.5, 1.0, 0.5, 2));
    }

    #[test]
    fn unknown_and_inconsistent_tableaus() {
        assert!(matches!(tableau::<f64>("rk4"), Err(Error::UnknownTableau(_))));
        // explicit Euler claimed as order 2
        assert!(ButcherTableau::new(vec![vec![0.0]], vec![1.0], vec![0.0], 2).is_err());
    }

    #[test]
    fn single_stage_kronecker_is_sum() {
        let x = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap();
        let xs = Matrix::from_rows(&[vec![0.5, -1.0], vec![2.0, 0.25], vec![1.0, 1.0]]).unwrap();
        let tab: ButcherTableau<f64> = tableau("implicit-midpoint").unwrap();
        let dt = 0.3;
        let xa = stage_matrix(&tab, dt, &x, &xs).unwrap();
        for i in 0..3 {
            for j in 0..2 {
                assert_eq!(xa[(i, j)], x[(i, j)] + dt * 0.5 * xs[(i, j)]);
            }
        }
    }

    #[test]
    fn step_counts() {
        assert_eq!(step_count(0.0, 1.0, 1e-3).unwrap(), 1000);
        assert_eq!(step_count(0.0, 0.0, 0.1).unwrap(), 0);
        assert!(step_count(0.0, 1.0, 0.3).is_err());
    }
}
