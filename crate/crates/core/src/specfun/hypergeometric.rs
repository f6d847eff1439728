//! Real Gauss ₂F₁ and Kummer ₁F₁.
//!
//! ₂F₁ dispatch for real z < 1:
//!
//! * terminating series when `a` or `b` is a nonpositive integer (any z);
//! * Pfaff transformation z ↦ z/(z−1) for z < 0, which lands in (0, 1);
//! * the power series for 0 ≤ z ≤ [`Z_SWITCH`];
//! * the z ↦ 1−z connection formula above it, with the logarithmic limit when
//!   c−a−b is within [`DEGENERATE_TOL`] of an integer. When the two connection
//!   terms cancel badly and the series has only positive terms, the plain
//!   series is summed instead (it converges, just slowly).

use crate::error::{Error, Result};
use crate::scalar::{c, Real};

use super::gamma::{digamma, gamma_ratio, is_nonpositive_integer, pochhammer, rgamma};

/// Switch point between the direct series and the 1−z connection formula.
pub const Z_SWITCH: f64 = 0.7;

/// Distance from an integer below which c−a−b is treated as degenerate.
pub const DEGENERATE_TOL: f64 = 1e-7;

/// Above this |z|, ₁F₁ at negative z uses the asymptotic series.
const ASYMPTOTIC_1F1_ABOVE: f64 = 60.0;

const MAX_TERMS_SHORT: usize = 20_000;
const MAX_TERMS_LONG: usize = 2_000_000;
// Loss-of-significance ratio above which the connection formula is rejected.
const CANCELLATION_LIMIT: f64 = 1e4;

/// Neumaier-compensated accumulator.
#[derive(Clone, Copy)]
struct Compensated<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Compensated<T> {
    fn new(v: T) -> Self {
        Self { sum: v, comp: T::zero() }
    }

    fn add(&mut self, v: T) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp = self.comp + ((self.sum - t) + v);
        } else {
            self.comp = self.comp + ((v - t) + self.sum);
        }
        self.sum = t;
    }

    fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// Sums Σ t_j with t_{j+1} = t_j · ratio(j), stopping once the geometric tail
/// bound falls below machine precision relative to the partial sum.
fn sum_series<T: Real>(mut ratio: impl FnMut(usize) -> T, max_terms: usize, what: &str) -> Result<T> {
    let eps = T::epsilon();
    let mut acc = Compensated::new(T::one());
    let mut term = T::one();
    let mut quiet = 0;
    for j in 0..max_terms {
        let r = ratio(j);
        term = term * r;
        if term == T::zero() {
            return Ok(acc.value());
        }
        acc.add(term);
        let ra = r.abs();
        let tail = if ra < T::one() { term.abs() * ra / (T::one() - ra) } else { T::infinity() };
        if tail <= eps * acc.value().abs() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(acc.value());
            }
        } else {
            quiet = 0;
        }
        if !acc.value().is_finite() {
            break;
        }
    }
    Err(Error::NonConvergence(what.to_string()))
}

fn series_2f1<T: Real>(a: T, b: T, cc: T, z: T, max_terms: usize) -> Result<T> {
    sum_series(
        |j| {
            let jj = T::of(j);
            (a + jj) * (b + jj) / ((cc + jj) * (jj + T::one())) * z
        },
        max_terms,
        "2F1 power series",
    )
}

fn terminating_2f1<T: Real>(n: usize, b: T, cc: T, z: T) -> T {
    // a = -n
    let a = -T::of(n);
    let mut acc = Compensated::new(T::one());
    let mut term = T::one();
    for j in 0..n {
        let jj = T::of(j);
        term = term * (a + jj) * (b + jj) / ((cc + jj) * (jj + T::one())) * z;
        acc.add(term);
    }
    acc.value()
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for real arguments.
///
/// Defined for z < 1, at z = 1 when c − a − b > 0, and for every real z when
/// the series terminates.
pub fn hyp2f1<T: Real>(a: T, b: T, cc: T, z: T) -> Result<T> {
    if a.is_nan() || b.is_nan() || cc.is_nan() || z.is_nan() {
        return Err(Error::InvalidParameter("NaN argument to 2F1".into()));
    }
    if z == T::zero() {
        return Ok(T::one());
    }
    // Terminating branch; pick the shorter polynomial when both terminate.
    let term_a = is_nonpositive_integer(a);
    let term_b = is_nonpositive_integer(b);
    if term_a || term_b {
        let (n_int, other) = match (term_a, term_b) {
            (true, true) if b > a => (b, a),
            (true, _) => (a, b),
            _ => (b, a),
        };
        let n = (-n_int).to_usize().unwrap_or(0);
        if is_nonpositive_integer(cc) && -cc < T::of(n) {
            return Err(Error::ParameterPole(format!("c = {} hits a pole before the series terminates", cc.as_f64())));
        }
        return Ok(terminating_2f1(n, other, cc, z));
    }
    if is_nonpositive_integer(cc) {
        return Err(Error::ParameterPole(format!("c = {}", cc.as_f64())));
    }
    if z == T::one() {
        let d = cc - a - b;
        if d > T::zero() {
            return gamma_ratio(&[cc, d], &[cc - a, cc - b]);
        }
        return Err(Error::NonConvergence(format!("2F1 diverges at z = 1 with c-a-b = {}", d.as_f64())));
    }
    if z > T::one() {
        return Err(Error::InvalidParameter(format!("2F1 is complex-valued for real z = {} > 1", z.as_f64())));
    }
    if z < T::zero() {
        // Pfaff: F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; z/(z-1)); choose the
        // variant whose prefactor exponent is smaller in magnitude.
        let w = z / (z - T::one());
        let (p, q) = if a.abs() <= b.abs() { (a, b) } else { (b, a) };
        let pre = (T::one() - z).powf(-p);
        return Ok(pre * hyp2f1(p, cc - q, cc, w)?);
    }
    if z <= c(Z_SWITCH) {
        return series_2f1(a, b, cc, z, MAX_TERMS_SHORT);
    }
    near_one(a, b, cc, z)
}

fn near_one<T: Real>(a: T, b: T, cc: T, z: T) -> Result<T> {
    let all_positive = a > T::zero() && b > T::zero() && cc > T::zero();
    // Large positive parameters make the connection terms cancel; the series
    // with positive terms is then the accurate route.
    if all_positive && a.max(b) > c(8.0) {
        return series_2f1(a, b, cc, z, MAX_TERMS_LONG);
    }
    match connection_1mz(a, b, cc, z) {
        Ok((value, magnitude)) => {
            let cancelled = magnitude > c::<T>(CANCELLATION_LIMIT) * value.abs();
            if cancelled && all_positive {
                series_2f1(a, b, cc, z, MAX_TERMS_LONG)
            } else {
                Ok(value)
            }
        }
        Err(e) => {
            if all_positive {
                series_2f1(a, b, cc, z, MAX_TERMS_LONG)
            } else {
                Err(e)
            }
        }
    }
}

/// z ↦ 1−z connection formula. Returns the value and the sum of the absolute
/// values of its two terms (a cancellation indicator).
fn connection_1mz<T: Real>(a: T, b: T, cc: T, z: T) -> Result<(T, T)> {
    let w = T::one() - z;
    let d = cc - a - b;
    let m = d.round();
    if (d - m).abs() < c(DEGENERATE_TOL) {
        let mi = m.to_i64().unwrap_or(0);
        if mi >= 0 {
            return log_connection(a, b, mi as usize, z);
        }
        // Euler: F(a,b;c;z) = (1-z)^{c-a-b} F(c-a, c-b; c; z)
        let (v, mag) = log_connection(cc - a, cc - b, (-mi) as usize, z)?;
        let pre = w.powf(d);
        return Ok((pre * v, pre.abs() * mag));
    }
    let coef1 = gamma_ratio(&[cc, d], &[cc - a, cc - b])?;
    let coef2 = gamma_ratio(&[cc, -d], &[a, b])?;
    let f1 = if coef1 == T::zero() { T::zero() } else { series_2f1(a, b, T::one() - d, w, MAX_TERMS_SHORT)? };
    let f2 = if coef2 == T::zero() { T::zero() } else { series_2f1(cc - a, cc - b, T::one() + d, w, MAX_TERMS_SHORT)? };
    let t1 = coef1 * f1;
    let t2 = w.powf(d) * coef2 * f2;
    Ok((t1 + t2, t1.abs() + t2.abs()))
}

/// Logarithmic connection formula for c = a + b + m, m = 0, 1, 2, ...
fn log_connection<T: Real>(a: T, b: T, m: usize, z: T) -> Result<(T, T)> {
    let cc = a + b + T::of(m);
    let w = T::one() - z;
    let zm1 = z - T::one();

    // finite part
    let mut finite = T::zero();
    if m > 0 {
        let scale = rgamma(a + T::of(m)) * rgamma(b + T::of(m));
        let mut zpow = T::one();
        for k in 0..m {
            let t =
                pochhammer(a, k) * pochhammer(b, k) * pochhammer(T::one(), m - k - 1) / pochhammer(T::one(), k) * zpow;
            finite = finite + t;
            zpow = zpow * zm1;
        }
        finite = finite * scale;
    }

    // logarithmic series
    let am = a + T::of(m);
    let bm = b + T::of(m);
    let lnw = w.ln();
    let mut psi1 = digamma(T::one())?;
    let mut psi_m1 = digamma(T::of(m + 1))?;
    let mut psi_a = digamma(am)?;
    let mut psi_b = digamma(bm)?;
    let mut coef = T::one() / pochhammer(T::one(), m);
    let mut acc = Compensated::new(coef * (lnw - psi1 - psi_m1 + psi_a + psi_b));
    let eps = T::epsilon();
    let mut converged = false;
    for k in 0..MAX_TERMS_SHORT {
        let kk = T::of(k);
        coef = coef * (am + kk) * (bm + kk) / ((kk + T::one()) * (kk + T::of(m + 1))) * w;
        psi1 = psi1 + T::one() / (kk + T::one());
        psi_m1 = psi_m1 + T::one() / (kk + T::of(m + 1));
        psi_a = psi_a + T::one() / (am + kk);
        psi_b = psi_b + T::one() / (bm + kk);
        let t = coef * (lnw - psi1 - psi_m1 + psi_a + psi_b);
        acc.add(t);
        if t.abs() <= eps * acc.value().abs() && k > 2 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence("2F1 logarithmic series".into()));
    }
    let logpart = zm1.powi(m as i32) * rgamma(a) * rgamma(b) * acc.value();
    let g = gamma_ratio(&[cc], &[])?;
    Ok((g * (finite - logpart), g.abs() * (finite.abs() + logpart.abs())))
}

/// Kummer's confluent hypergeometric function ₁F₁(a; b; z).
///
/// Negative arguments go through the Kummer transformation
/// ₁F₁(a; b; z) = eᶻ ₁F₁(b−a; b; −z) so the summed series never alternates
/// at scale.
pub fn hyp1f1<T: Real>(a: T, b: T, z: T) -> Result<T> {
    if a.is_nan() || b.is_nan() || z.is_nan() {
        return Err(Error::InvalidParameter("NaN argument to 1F1".into()));
    }
    if z == T::zero() {
        return Ok(T::one());
    }
    if is_nonpositive_integer(b) {
        let terminates_first = is_nonpositive_integer(a) && a > b;
        if !terminates_first {
            return Err(Error::ParameterPole(format!("b = {}", b.as_f64())));
        }
    }
    if z < T::zero() {
        if -z >= c(ASYMPTOTIC_1F1_ABOVE) && !is_nonpositive_integer(b - a) {
            if let Some(v) = asymptotic_1f1_negative(a, b, -z) {
                return Ok(v);
            }
        }
        return Ok(z.exp() * series_1f1(b - a, b, -z)?);
    }
    series_1f1(a, b, z)
}

/// ₁F₁(a; b; −x) for large x from the algebraic asymptotic series
/// Γ(b)/Γ(b−a) x^{−a} Σ (a)ₖ(a−b+1)ₖ/k! x^{−k}, plus the leading term of the
/// exponentially small part. None if the series stalls above rounding level.
fn asymptotic_1f1_negative<T: Real>(a: T, b: T, x: T) -> Option<T> {
    let eps = T::epsilon();
    let mut acc = Compensated::new(T::one());
    let mut term = T::one();
    let mut converged = false;
    for k in 0..200 {
        let kk = T::of(k);
        let next = term * (a + kk) * (a - b + T::one() + kk) / ((kk + T::one()) * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        acc.add(term);
        if term.abs() <= eps * acc.value().abs() {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let algebraic = gamma_ratio(&[b], &[b - a]).ok()? * x.powf(-a) * acc.value();
    let exponential =
        if is_nonpositive_integer(a) { T::zero() } else { gamma_ratio(&[b], &[a]).ok()? * (-x).exp() * x.powf(a - b) };
    Some(algebraic + exponential)
}

fn series_1f1<T: Real>(a: T, b: T, z: T) -> Result<T> {
    if is_nonpositive_integer(a) {
        let n = (-a).to_usize().unwrap_or(0);
        let mut acc = Compensated::new(T::one());
        let mut term = T::one();
        for j in 0..n {
            let jj = T::of(j);
            term = term * (a + jj) / ((b + jj) * (jj + T::one())) * z;
            acc.add(term);
        }
        return Ok(acc.value());
    }
    sum_series(
        |j| {
            let jj = T::of(j);
            (a + jj) / ((b + jj) * (jj + T::one())) * z
        },
        MAX_TERMS_SHORT,
        "1F1 power series",
    )
}
