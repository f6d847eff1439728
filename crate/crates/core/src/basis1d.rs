//! Jacobi polynomials, weighted Jacobi polynomials and extended Jacobi
//! functions on the real line.
//!
//! The extended function P̃ₙ^{(a,s)} is the fractional Laplacian (−Δ)^s of the
//! weighted polynomial Qₙ^{(a,a)}. It is evaluated by a hypergeometric closed
//! form with one branch inside (−1, 1) and one outside; both are singular at
//! |x| = 1.

use crate::error::{Error, Result};
use crate::scalar::{c, Real};
use crate::specfun::{gamma_ratio, hyp2f1, is_nonpositive_integer};

/// Points closer than this to ±1 are rejected by the extended functions.
pub const SINGULAR_TOL: f64 = 1e-12;

/// A finite interval [a, b] with a < b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub a: T,
    pub b: T,
}

impl<T: Real> Interval<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("interval needs a < b, got [{}, {}]", a.as_f64(), b.as_f64())));
        }
        Ok(Self { a, b })
    }

    /// The reference interval [−1, 1].
    pub fn reference() -> Self {
        Self { a: -T::one(), b: T::one() }
    }

    pub fn half_width(&self) -> T {
        (self.b - self.a) * c(0.5)
    }

    pub fn midpoint(&self) -> T {
        (self.a + self.b) * c(0.5)
    }

    /// The affine map sending [a, b] onto [−1, 1].
    pub fn to_reference(&self, x: T) -> T {
        (x - self.midpoint()) / self.half_width()
    }
}

/// Evaluates `f` composed with the affine map of `interval` onto [−1, 1].
pub fn affine_eval<T: Real, R>(f: impl FnOnce(T) -> R, interval: &Interval<T>, x: T) -> R {
    f(interval.to_reference(x))
}

/// Jacobi weight exponents (a, b), both greater than −1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams<T> {
    pub a: T,
    pub b: T,
}

impl<T: Real> JacobiParams<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !(a > -T::one() && b > -T::one()) {
            return Err(Error::InvalidParameter(format!(
                "Jacobi parameters must exceed -1, got ({}, {})",
                a.as_f64(),
                b.as_f64()
            )));
        }
        Ok(Self { a, b })
    }

    pub fn symmetric(a: T) -> Result<Self> {
        Self::new(a, a)
    }
}

/// Parameters of P̃ₙ^{(a,s)}: weight exponent `a` and fractional exponent `s`.
///
/// `s` must lie in (−1/2, 0) ∪ (0, 1). The endpoint s = −1/2 is accepted, but
/// only degrees n ≥ 1 can then be evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedParams<T> {
    pub a: T,
    pub s: T,
}

impl<T: Real> ExtendedParams<T> {
    pub fn new(a: T, s: T) -> Result<Self> {
        if !(a > -T::one()) {
            return Err(Error::InvalidParameter(format!("weight exponent {} must exceed -1", a.as_f64())));
        }
        let half = c::<T>(0.5);
        let ok = (s >= -half && s < T::zero()) || (s > T::zero() && s < T::one());
        if !ok {
            return Err(Error::InadmissibleExponent { family: "extended Jacobi".into(), exponent: s.as_f64() });
        }
        Ok(Self { a, s })
    }

    /// Lowest degree that can be evaluated.
    pub fn min_degree(&self) -> usize {
        usize::from(self.s <= c(-0.5))
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n < self.min_degree() {
            return Err(Error::InvalidParameter(format!("degree {n} is not defined for s = {}", self.s.as_f64())));
        }
        Ok(())
    }

    fn is_matched(&self) -> bool {
        (self.a - self.s).abs() <= T::epsilon() * c(8.0)
    }
}

/// P_n^{(a,b)}(x) by the forward three-term recurrence (defined for all x).
pub fn jacobi_p<T: Real>(n: usize, params: JacobiParams<T>, x: T) -> T {
    let mut out = [T::zero(); 1];
    jacobi_p_into(n, params, x, |k, v| {
        if k == n {
            out[0] = v;
        }
    });
    out[0]
}

/// Calls `sink(k, P_k(x))` for k = 0..=n.
fn jacobi_p_into<T: Real>(n: usize, params: JacobiParams<T>, x: T, mut sink: impl FnMut(usize, T)) {
    let JacobiParams { a, b } = params;
    let two = c::<T>(2.0);
    let mut p0 = T::one();
    sink(0, p0);
    if n == 0 {
        return;
    }
    let mut p1 = (a + T::one()) + (a + b + two) * (x - T::one()) / two;
    sink(1, p1);
    for k in 1..n {
        let kk = T::of(k);
        let sum = two * kk + a + b;
        let den = two * (kk + T::one()) * (kk + a + b + T::one()) * sum;
        let p2 = ((sum + T::one()) * ((sum + two) * sum * x + a * a - b * b) * p1
            - two * (kk + a) * (kk + b) * (sum + two) * p0)
            / den;
        p0 = p1;
        p1 = p2;
        sink(k + 1, p1);
    }
}

/// Weight (1−x)₊^a (1+x)₊^b, zero for |x| ≥ 1.
fn jacobi_weight<T: Real>(params: JacobiParams<T>, x: T) -> T {
    if x.abs() >= T::one() {
        return T::zero();
    }
    (T::one() - x).powf(params.a) * (T::one() + x).powf(params.b)
}

/// Qₙ^{(a,b)}(x) = (1−x)₊^a (1+x)₊^b Pₙ^{(a,b)}(x); exactly zero for |x| ≥ 1.
pub fn weighted_q<T: Real>(n: usize, params: JacobiParams<T>, x: T) -> T {
    let w = jacobi_weight(params, x);
    if w == T::zero() {
        return w;
    }
    w * jacobi_p(n, params, x)
}

/// k = ⌊n/2⌋, p = n − 2k and k' = ⌊(n−1)/2⌋ (−1 for n = 0).
#[derive(Debug, Clone, Copy)]
struct Parity {
    k: usize,
    p: usize,
    k_out: i64,
}

impl Parity {
    fn of(n: usize) -> Self {
        let k = n / 2;
        Self { k, p: n - 2 * k, k_out: (n as i64 - 1).div_euclid(2) }
    }
}

/// The constant c_{s,n} with P̃ₙ^{(s,s)} = c_{s,n} Pₙ^{(s,s)} on (−1, 1).
pub fn matched_constant<T: Real>(n: usize, s: T) -> Result<T> {
    let Parity { k, .. } = Parity::of(n);
    let half = c::<T>(0.5);
    let nk = T::of(n - k);
    let ratio = gamma_ratio(&[s + T::of(k) + T::one(), nk + s + half], &[T::of(k) + T::one(), nk + half])?;
    Ok(c::<T>(4.0).powf(s) * ratio)
}

fn check_singular<T: Real>(x: T) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite point {}", x.as_f64())));
    }
    if (x.abs() - T::one()).abs() < c(SINGULAR_TOL) {
        return Err(Error::SingularPoint(x.as_f64()));
    }
    Ok(())
}

/// P̃ₙ^{(a,s)}(x) = (−Δ)^s Qₙ^{(a,a)}(x) for |x| ≠ 1.
pub fn extended_p<T: Real>(n: usize, params: ExtendedParams<T>, x: T) -> Result<T> {
    params.check_degree(n)?;
    check_singular(x)?;
    if x.abs() < T::one() {
        if params.is_matched() {
            let s = params.s;
            return Ok(matched_constant(n, s)? * jacobi_p(n, JacobiParams { a: s, b: s }, x));
        }
        if n <= 1 {
            return extended_inside(n, params, x);
        }
        // The closed form loses digits to cancellation at high degree; the
        // recurrence from degrees 0 and 1 does not.
        let mut value = T::nan();
        extended_p_column(n, params, x, |k, v| {
            if k == n {
                value = v;
            }
        })?;
        Ok(value)
    } else {
        extended_outside(n, params, x)
    }
}

fn extended_inside<T: Real>(n: usize, params: ExtendedParams<T>, x: T) -> Result<T> {
    let ExtendedParams { a, s } = params;
    let Parity { k, p, .. } = Parity::of(n);
    let half = c::<T>(0.5);
    let (nn, kk, pp) = (T::of(n), T::of(k), T::of(p));
    let nk = T::of(n - k);
    // 1/Γ(a − s + k + 1) vanishes at its poles; the hypergeometric factor is
    // finite there, so the product is zero.
    if is_nonpositive_integer(a - s + kk + T::one()) {
        return Ok(T::zero());
    }
    let ratio = gamma_ratio(&[a + nn + T::one(), nk + s + half], &[nn + T::one(), pp + half, a - s + kk + T::one()])?;
    let sign = if k % 2 == 0 { T::one() } else { -T::one() };
    let f = hyp2f1(s - a - kk, nk + s + half, pp + half, x * x)?;
    Ok(c::<T>(4.0).powf(s) * sign * ratio * x.powi(p as i32) * f)
}

fn extended_outside<T: Real>(n: usize, params: ExtendedParams<T>, x: T) -> Result<T> {
    let ExtendedParams { a, s } = params;
    let Parity { k, p, k_out } = Parity::of(n);
    let two = c::<T>(2.0);
    let nn = T::of(n);
    let ko = T::from_i64(k_out).unwrap_or_else(T::zero);
    let sin_pi_s = crate::specfun::sin_pi(s);
    if sin_pi_s == T::zero() {
        return Ok(T::zero());
    }
    let ratio = gamma_ratio(&[a + nn + T::one(), nn + two * s + T::one()], &[nn + T::one(), nn + c(1.5) + a])?;
    let ax = x.abs();
    let decay = ax.powf(-(two * ko + two * s + c(3.0)));
    let f = hyp2f1(s + T::of(k) + T::one(), ko + c(1.5) + s, nn + c(1.5) + a, (x * x).recip())?;
    let scale = c::<T>(4.0).powf(s) * two.powf(-nn - two * s) / T::PI().sqrt();
    Ok(-scale * sin_pi_s * ratio * x.powi(p as i32) * decay * f)
}

/// Coefficients (Ã_n, C̃_n) of P̃_{n+1} = Ã_n x P̃_n − C̃_n P̃_{n−1}, n ≥ 1.
fn extended_recurrence<T: Real>(n: usize, params: ExtendedParams<T>) -> (T, T) {
    let ExtendedParams { a, s } = params;
    let nn = T::of(n);
    let one = T::one();
    let two = c::<T>(2.0);
    let big = nn + two * a + one - two * s;
    let aa = (two * nn + two * a + one) * (two * nn + two * a + two) / (two * (nn + one) * big);
    let cc = (nn + a) * (nn + a) * (two * nn + two * a + two) * (nn + two * s)
        / (nn * (nn + one) * big * (two * nn + two * a));
    (aa, cc)
}

/// All degrees 0..=n_max of P̃^{(a,s)} at every point, indexed `[degree][point]`.
///
/// Inside (−1, 1) the rows come from the three-term recurrence seeded with the
/// closed form at degrees 0 and 1; outside each degree is evaluated directly.
/// For s = −1/2, degree 0 is undefined and row 0 is filled with NaN.
pub fn extended_p_batch<T: Real>(n_max: usize, params: ExtendedParams<T>, xs: &[T]) -> Result<Vec<Vec<T>>> {
    let mut rows = vec![vec![T::nan(); xs.len()]; n_max + 1];
    for (j, &x) in xs.iter().enumerate() {
        extended_p_column(n_max, params, x, |n, v| rows[n][j] = v)?;
    }
    Ok(rows)
}

/// Evaluates degrees min_degree..=n_max at one point into `sink(n, value)`.
pub(crate) fn extended_p_column<T: Real>(
    n_max: usize,
    params: ExtendedParams<T>,
    x: T,
    mut sink: impl FnMut(usize, T),
) -> Result<()> {
    let first = params.min_degree();
    if n_max < first {
        return Ok(());
    }
    check_singular(x)?;
    if x.abs() > T::one() {
        for n in first..=n_max {
            sink(n, extended_outside(n, params, x)?);
        }
        return Ok(());
    }
    if params.is_matched() {
        let s = params.s;
        let mut err = None;
        jacobi_p_into(n_max, JacobiParams { a: s, b: s }, x, |n, v| {
            if n >= first && err.is_none() {
                match matched_constant(n, s) {
                    Ok(cn) => sink(n, cn * v),
                    Err(e) => err = Some(e),
                }
            }
        });
        return err.map_or(Ok(()), Err);
    }
    // With s = −1/2 the coefficient C̃₁ vanishes, so the missing degree 0 is
    // never used.
    let mut prev = if first == 0 { extended_inside(0, params, x)? } else { T::zero() };
    if first == 0 {
        sink(0, prev);
    }
    if n_max == 0 {
        return Ok(());
    }
    let mut cur = extended_inside(1, params, x)?;
    sink(1, cur);
    for n in 1..n_max {
        let (aa, cc) = extended_recurrence(n, params);
        let next = aa * x * cur - cc * prev;
        prev = cur;
        cur = next;
        sink(n + 1, cur);
    }
    Ok(())
}

/// Degrees 0..=n_max of Qₙ^{(a,b)} at one point into `sink(n, value)`.
pub(crate) fn weighted_q_column<T: Real>(n_max: usize, params: JacobiParams<T>, x: T, mut sink: impl FnMut(usize, T)) {
    let w = jacobi_weight(params, x);
    if w == T::zero() {
        for n in 0..=n_max {
            sink(n, T::zero());
        }
        return;
    }
    jacobi_p_into(n_max, params, x, |n, v| sink(n, w * v));
}
