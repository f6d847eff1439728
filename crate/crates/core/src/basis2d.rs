//! Generalized Zernike polynomials on the unit disk, their weighted versions,
//! and extended Zernike functions on the plane.

use crate::basis1d::{jacobi_p, JacobiParams, SINGULAR_TOL};
use crate::error::{Error, Result};
use crate::scalar::{c, Real};
use crate::specfun::{gamma_ratio, hyp2f1, rgamma};

/// Index (n, m, j): total degree n, Fourier mode m and sign j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZernikeIndex {
    pub n: usize,
    pub m: usize,
    pub j: u8,
}

impl ZernikeIndex {
    pub fn new(n: usize, m: usize, j: u8) -> Result<Self> {
        let ok = m <= n && (n - m).is_multiple_of(2) && j <= 1 && (m != 0 || j == 1);
        if !ok {
            return Err(Error::InvalidParameter(format!("invalid Zernike index ({n}, {m}, {j})")));
        }
        Ok(Self { n, m, j })
    }

    /// The rotationally symmetric index of radial degree `l` (n = 2l, m = 0, j = 1).
    pub fn radial(l: usize) -> Self {
        Self { n: 2 * l, m: 0, j: 1 }
    }

    /// Degree (n − m)/2 of the Jacobi factor.
    pub fn radial_degree(&self) -> usize {
        (self.n - self.m) / 2
    }
}

/// Radius of the disk a family lives on. A family with scale `a` is the
/// unit-disk family evaluated at (x/a, y/a).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialScale<T> {
    pub a: T,
}

impl<T: Real> RadialScale<T> {
    pub fn new(a: T) -> Result<Self> {
        if !(a > T::zero()) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!("radial scale must be positive, got {}", a.as_f64())));
        }
        Ok(Self { a })
    }

    pub fn to_reference(&self, x: T, y: T) -> (T, T) {
        (x / self.a, y / self.a)
    }
}

/// V_{m,j}(x, y) = r^m sin(mθ + jπ/2) with θ = atan2(y, x).
fn angular<T: Real>(m: usize, j: u8, x: T, y: T) -> T {
    if m == 0 {
        return if j == 1 { T::one() } else { T::zero() };
    }
    let r = x.hypot(y);
    if r == T::zero() {
        return T::zero();
    }
    let theta = y.atan2(x);
    // sin(mθ + π/2) = cos(mθ), written out so j = 1 carries no rounding
    let trig = if j == 1 { (T::of(m) * theta).cos() } else { (T::of(m) * theta).sin() };
    r.powi(m as i32) * trig
}

/// Generalized Zernike polynomial Z^{(b)}_{n,m,j}(x, y).
pub fn zernike_z<T: Real>(idx: ZernikeIndex, b: T, x: T, y: T) -> T {
    let r2 = x * x + y * y;
    let p = jacobi_p(idx.radial_degree(), JacobiParams { a: b, b: T::of(idx.m) }, c::<T>(2.0) * r2 - T::one());
    angular(idx.m, idx.j, x, y) * p
}

/// Weighted Zernike polynomial (1 − r²)₊^b Z^{(b)}_{n,m,j}; zero for r ≥ 1.
pub fn weighted_w<T: Real>(idx: ZernikeIndex, b: T, x: T, y: T) -> T {
    let r2 = x * x + y * y;
    if r2 >= T::one() {
        return T::zero();
    }
    (T::one() - r2).powf(b) * zernike_z(idx, b, x, y)
}

fn check_exponent<T: Real>(s: T) -> Result<()> {
    if !(s > -T::one() && s < T::one()) {
        return Err(Error::InadmissibleExponent { family: "extended Zernike".into(), exponent: s.as_f64() });
    }
    Ok(())
}

/// Inside prefactor: Z̃ = inside_constant · Z^{(s)} for r < 1.
pub fn inside_constant<T: Real>(l: usize, m: usize, s: T) -> Result<T> {
    let (ll, mm) = (T::of(l), T::of(m));
    let one = T::one();
    Ok(c::<T>(4.0).powf(s) * gamma_ratio(&[one + s + ll, one + mm + ll + s], &[ll + one, one + ll + mm])?)
}

/// Radial factor of Z̃^{(s,s)} (everything except V_{m,j}) at radius r > 1.
fn outside_radial<T: Real>(l: usize, m: usize, s: T, r: T) -> Result<T> {
    let (ll, mm) = (T::of(l), T::of(m));
    let one = T::one();
    let two = c::<T>(2.0);
    // 1/Γ(−l−s) through reflection: zero at s = 0 and exact there.
    let rg = rgamma(-ll - s);
    if rg == T::zero() {
        return Ok(T::zero());
    }
    let sign = if l.is_multiple_of(2) { one } else { -one };
    let ratio = gamma_ratio(&[one + s + ll, one + mm + ll + s], &[ll + one, s + mm + two * ll + two])?;
    let f = hyp2f1(ll + s + one, one + mm + ll + s, s + mm + two * ll + two, (r * r).recip())?;
    let decay = r.powf(-two * (one + mm + ll + s));
    Ok(c::<T>(4.0).powf(s) * sign * ratio * rg * f * decay)
}

/// Extended Zernike function Z̃^{(s,s)}_{n,m,j} = (−Δ)^s W^{(s)}_{n,m,j} for r ≠ 1.
pub fn extended_z<T: Real>(idx: ZernikeIndex, s: T, x: T, y: T) -> Result<T> {
    check_exponent(s)?;
    let r = x.hypot(y);
    if !r.is_finite() {
        return Err(Error::InvalidParameter("non-finite point".into()));
    }
    if (r - T::one()).abs() < c(SINGULAR_TOL) {
        return Err(Error::SingularPoint(r.as_f64()));
    }
    let l = idx.radial_degree();
    let v = angular(idx.m, idx.j, x, y);
    if r < T::one() {
        return Ok(inside_constant(l, idx.m, s)? * zernike_z(idx, s, x, y));
    }
    Ok(v * outside_radial(l, idx.m, s, r)?)
}

/// Radial degrees 0..=l_max of the m = 0 extended family at radius r, into
/// `sink(l, value)`. Inside the disk this runs the Jacobi recurrence once.
pub(crate) fn extended_z_radial_column<T: Real>(
    l_max: usize,
    s: T,
    r: T,
    mut sink: impl FnMut(usize, T),
) -> Result<()> {
    check_exponent(s)?;
    if (r - T::one()).abs() < c(SINGULAR_TOL) {
        return Err(Error::SingularPoint(r.as_f64()));
    }
    if r > T::one() {
        for l in 0..=l_max {
            sink(l, outside_radial(l, 0, s, r)?);
        }
        return Ok(());
    }
    let x = c::<T>(2.0) * r * r - T::one();
    for l in 0..=l_max {
        // degrees are few per family; the direct recurrence per degree is cheap
        sink(l, inside_constant(l, 0, s)? * jacobi_p(l, JacobiParams { a: s, b: T::zero() }, x));
    }
    Ok(())
}

/// Radial degrees 0..=l_max of the m = 0 weighted family at radius r.
pub(crate) fn weighted_w_radial_column<T: Real>(l_max: usize, b: T, r: T, mut sink: impl FnMut(usize, T)) {
    let r2 = r * r;
    if r2 >= T::one() {
        for l in 0..=l_max {
            sink(l, T::zero());
        }
        return;
    }
    let w = (T::one() - r2).powf(b);
    let x = c::<T>(2.0) * r2 - T::one();
    for l in 0..=l_max {
        sink(l, w * jacobi_p(l, JacobiParams { a: b, b: T::zero() }, x));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn index_rules() {
        assert!(ZernikeIndex::new(2, 0, 1).is_ok());
        assert!(ZernikeIndex::new(2, 0, 0).is_err());
        assert!(ZernikeIndex::new(3, 2, 1).is_err());
        assert!(ZernikeIndex::new(3, 1, 0).is_ok());
        assert!(ZernikeIndex::new(1, 3, 0).is_err());
    }

    #[test]
    fn constant_mode() {
        let idx = ZernikeIndex::new(0, 0, 1).unwrap();
        for &(x, y) in &[(0.0, 0.0), (0.3, -0.2), (5.0, 1.0)] {
            assert_eq!(zernike_z(idx, 0.5, x, y), 1.0);
        }
        assert_eq!(weighted_w(idx, 0.5, 0.0, 0.0), 1.0);
        assert_eq!(weighted_w(idx, 0.5, 1.2, 0.0), 0.0);
    }

    #[test]
    fn low_degree_expansion() {
        // Z_{3,1,0} = r sin(θ) P₁^{(1/2,1)}(2r²−1) = y · P₁(2r² − 1)
        let idx = ZernikeIndex::new(3, 1, 0).unwrap();
        let (x, y) = (0.3, 0.4);
        let t = 2.0 * 0.25 - 1.0;
        let p1 = 1.5 + (0.5 + 1.0 + 2.0) * (t - 1.0) / 2.0;
        assert_relative_eq!(zernike_z(idx, 0.5, x, y), y * p1, max_relative = 1e-14);
        let idx = ZernikeIndex::new(3, 1, 1).unwrap();
        assert_relative_eq!(zernike_z(idx, 0.5, x, y), x * p1, max_relative = 1e-14);
    }

    #[test]
    fn extended_origin_and_known_value() {
        let idx = ZernikeIndex::new(3, 1, 0).unwrap();
        assert_eq!(extended_z(idx, 0.5, 0.0, 0.0).unwrap(), 0.0);
        let v = extended_z(ZernikeIndex::radial(0), -0.5, 0.5, 0.0).unwrap();
        assert_relative_eq!(v, std::f64::consts::FRAC_PI_2, max_relative = 1e-14);
        assert!(matches!(extended_z(ZernikeIndex::radial(0), 0.5, 0.6, 0.8), Err(Error::SingularPoint(_))));
    }

    #[test]
    fn radial_columns_match_pointwise() {
        for &r in &[0.1, 0.7, 1.3, 4.0] {
            let mut ext = vec![];
            extended_z_radial_column(6, 0.5, r, |_, v| ext.push(v)).unwrap();
            let mut wei = vec![];
            weighted_w_radial_column(6, 0.5, r, |_, v| wei.push(v));
            for l in 0..=6 {
                let idx = ZernikeIndex::radial(l);
                assert_relative_eq!(ext[l], extended_z(idx, 0.5, 0.0, r).unwrap(), max_relative = 1e-14);
                assert_eq!(wei[l], weighted_w(idx, 0.5, r, 0.0));
            }
        }
    }
}
