use crate::basis1d::{extended_p_column, weighted_q_column, ExtendedParams, Interval, JacobiParams};
use crate::basis2d::{extended_z_radial_column, weighted_w_radial_column, RadialScale};
use crate::error::{Error, Result};
use crate::scalar::{c, Real};

/// A point of ℝ or ℝ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point<T> {
    D1(T),
    D2(T, T),
}

impl<T: Real> Point<T> {
    pub fn dim(&self) -> usize {
        match self {
            Point::D1(_) => 1,
            Point::D2(..) => 2,
        }
    }

    /// |x| in one dimension, r in two.
    pub fn norm(&self) -> T {
        match *self {
            Point::D1(x) => x.abs(),
            Point::D2(x, y) => x.hypot(y),
        }
    }
}

/// Which functions a family holds, with their parameters.
///
/// Zernike families are restricted to the rotationally symmetric mode
/// (m, j) = (0, 1); their degree is the radial Jacobi degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyKind<T> {
    /// Qₙ^{(a,a)}.
    WeightedJacobi { a: T },
    /// P̃ₙ^{(a,s)} = (−Δ)^s Qₙ^{(a,a)}.
    ExtendedJacobi { a: T, s: T },
    /// W^{(b)}_{2n,0,1} = (1 − r²)^b Z^{(b)}_{2n,0,1}.
    WeightedZernike { b: T },
    /// Z̃^{(s,s)}_{2n,0,1} = (−Δ)^s W^{(s)}_{2n,0,1}.
    ExtendedZernike { s: T },
}

impl<T: Real> FamilyKind<T> {
    pub fn is_extended(&self) -> bool {
        matches!(self, FamilyKind::ExtendedJacobi { .. } | FamilyKind::ExtendedZernike { .. })
    }

    pub fn dim(&self) -> usize {
        match self {
            FamilyKind::WeightedJacobi { .. } | FamilyKind::ExtendedJacobi { .. } => 1,
            _ => 2,
        }
    }

    fn label(&self) -> String {
        match self {
            FamilyKind::WeightedJacobi { a } => format!("Q^({}, {})", a.as_f64(), a.as_f64()),
            FamilyKind::ExtendedJacobi { a, s } => format!("P~^({}, {})", a.as_f64(), s.as_f64()),
            FamilyKind::WeightedZernike { b } => format!("W^({})", b.as_f64()),
            FamilyKind::ExtendedZernike { s } => format!("Z~^({}, {})", s.as_f64(), s.as_f64()),
        }
    }
}

/// Where a family lives: an interval of ℝ or a disk of given radius in ℝ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry<T> {
    Interval(Interval<T>),
    Disk(RadialScale<T>),
}

impl<T: Real> Geometry<T> {
    /// Dilation factor relative to the reference domain.
    pub fn scale(&self) -> T {
        match self {
            Geometry::Interval(i) => i.half_width(),
            Geometry::Disk(d) => d.a,
        }
    }
}

/// One affine- or radially-mapped basis family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFamily<T> {
    pub kind: FamilyKind<T>,
    pub geometry: Geometry<T>,
    /// First included degree (0 or 1).
    pub degree_offset: usize,
}

impl<T: Real> BasisFamily<T> {
    pub fn new(kind: FamilyKind<T>, geometry: Geometry<T>, degree_offset: usize) -> Result<Self> {
        if degree_offset > 1 {
            return Err(Error::InvalidParameter(format!("degree offset {degree_offset} must be 0 or 1")));
        }
        let dim_ok = matches!(
            (&kind, &geometry),
            (FamilyKind::WeightedJacobi { .. } | FamilyKind::ExtendedJacobi { .. }, Geometry::Interval(_))
                | (FamilyKind::WeightedZernike { .. } | FamilyKind::ExtendedZernike { .. }, Geometry::Disk(_))
        );
        if !dim_ok {
            return Err(Error::InvalidParameter(format!("{} cannot live on {:?}", kind.label(), geometry)));
        }
        match kind {
            FamilyKind::WeightedJacobi { a } => {
                JacobiParams::symmetric(a)?;
            }
            FamilyKind::ExtendedJacobi { a, s } => {
                let p = ExtendedParams::new(a, s)?;
                if degree_offset < p.min_degree() {
                    return Err(Error::InvalidParameter(format!(
                        "{} needs degree offset {}",
                        kind.label(),
                        p.min_degree()
                    )));
                }
            }
            FamilyKind::WeightedZernike { b } => {
                if !(b > -T::one()) {
                    return Err(Error::InvalidParameter(format!("Zernike weight {} must exceed -1", b.as_f64())));
                }
            }
            FamilyKind::ExtendedZernike { s } => {
                if !(s > -T::one() && s < T::one()) || s == T::zero() {
                    return Err(Error::InadmissibleExponent {
                        family: "extended Zernike".into(),
                        exponent: s.as_f64(),
                    });
                }
            }
        }
        Ok(Self { kind, geometry, degree_offset })
    }

    pub fn weighted_jacobi(a: T, interval: Interval<T>) -> Result<Self> {
        Self::new(FamilyKind::WeightedJacobi { a }, Geometry::Interval(interval), 0)
    }

    pub fn extended_jacobi(a: T, s: T, interval: Interval<T>, degree_offset: usize) -> Result<Self> {
        Self::new(FamilyKind::ExtendedJacobi { a, s }, Geometry::Interval(interval), degree_offset)
    }

    pub fn weighted_zernike(b: T, radius: T) -> Result<Self> {
        Self::new(FamilyKind::WeightedZernike { b }, Geometry::Disk(RadialScale::new(radius)?), 0)
    }

    pub fn extended_zernike(s: T, radius: T) -> Result<Self> {
        Self::new(FamilyKind::ExtendedZernike { s }, Geometry::Disk(RadialScale::new(radius)?), 0)
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    /// Same family up to a relative tolerance on the parameters.
    pub(crate) fn approx_eq(&self, other: &Self) -> bool {
        let close = |x: T, y: T| (x - y).abs() <= c::<T>(1e-14) * T::one().max(x.abs()).max(y.abs());
        let kinds = match (self.kind, other.kind) {
            (FamilyKind::WeightedJacobi { a: a1 }, FamilyKind::WeightedJacobi { a: a2 }) => close(a1, a2),
            (FamilyKind::ExtendedJacobi { a: a1, s: s1 }, FamilyKind::ExtendedJacobi { a: a2, s: s2 }) => {
                close(a1, a2) && close(s1, s2)
            }
            (FamilyKind::WeightedZernike { b: b1 }, FamilyKind::WeightedZernike { b: b2 }) => close(b1, b2),
            (FamilyKind::ExtendedZernike { s: s1 }, FamilyKind::ExtendedZernike { s: s2 }) => close(s1, s2),
            _ => false,
        };
        kinds && self.geometry == other.geometry && self.degree_offset == other.degree_offset
    }

    /// The family (−Δ)^t maps this one onto, together with the dilation
    /// factor scale^{−2t}. For t = 0 this is the family itself with factor 1.
    pub fn shifted(&self, t: T) -> Result<(T, Self)> {
        if t == T::zero() {
            return Ok((T::one(), *self));
        }
        let tiny = c::<T>(1e-14);
        let kind = match self.kind {
            FamilyKind::WeightedJacobi { a } => FamilyKind::ExtendedJacobi { a, s: t },
            FamilyKind::ExtendedJacobi { a, s } => {
                let st = s + t;
                if st.abs() <= tiny {
                    FamilyKind::WeightedJacobi { a }
                } else {
                    FamilyKind::ExtendedJacobi { a, s: st }
                }
            }
            FamilyKind::WeightedZernike { b } => {
                if (t - b).abs() > tiny {
                    return Err(Error::InadmissibleExponent {
                        family: format!("{} (only exponent equal to the weight is supported)", self.kind.label()),
                        exponent: t.as_f64(),
                    });
                }
                FamilyKind::ExtendedZernike { s: b }
            }
            FamilyKind::ExtendedZernike { s } => {
                if (s + t).abs() > tiny {
                    return Err(Error::InadmissibleExponent {
                        family: format!("{} (only the inverse exponent is supported)", self.kind.label()),
                        exponent: t.as_f64(),
                    });
                }
                FamilyKind::WeightedZernike { b: s }
            }
        };
        let family = Self::new(kind, self.geometry, self.degree_offset).map_err(|e| match e {
            Error::InadmissibleExponent { exponent, .. } => {
                Error::InadmissibleExponent { family: self.kind.label(), exponent }
            }
            other => other,
        })?;
        let factor = self.geometry.scale().powf(-(t + t));
        Ok((factor, family))
    }

    /// Values of degrees `degree_offset..=n_max` at `point`, passed to
    /// `sink(degree, value)`.
    pub fn eval_degrees(&self, n_max: usize, point: Point<T>, mut sink: impl FnMut(usize, T)) -> Result<()> {
        let lo = self.degree_offset;
        if n_max < lo {
            return Ok(());
        }
        let mut keep = |n: usize, v: T| {
            if n >= lo {
                sink(n, v)
            }
        };
        match (self.kind, self.geometry, point) {
            (FamilyKind::WeightedJacobi { a }, Geometry::Interval(i), Point::D1(x)) => {
                weighted_q_column(n_max, JacobiParams { a, b: a }, i.to_reference(x), keep);
                Ok(())
            }
            (FamilyKind::ExtendedJacobi { a, s }, Geometry::Interval(i), Point::D1(x)) => {
                extended_p_column(n_max, ExtendedParams { a, s }, i.to_reference(x), keep)
            }
            (FamilyKind::WeightedZernike { b }, Geometry::Disk(d), Point::D2(x, y)) => {
                let (u, v) = d.to_reference(x, y);
                weighted_w_radial_column(n_max, b, u.hypot(v), keep);
                Ok(())
            }
            (FamilyKind::ExtendedZernike { s }, Geometry::Disk(d), Point::D2(x, y)) => {
                let (u, v) = d.to_reference(x, y);
                extended_z_radial_column(n_max, s, u.hypot(v), &mut keep)
            }
            _ => {
                Err(Error::Shape(format!("{}-dimensional point for a {}-dimensional family", point.dim(), self.dim())))
            }
        }
    }

    /// Single value of degree n at `point`.
    pub fn eval(&self, n: usize, point: Point<T>) -> Result<T> {
        if n < self.degree_offset {
            return Err(Error::InvalidParameter(format!("degree {n} is below the family offset")));
        }
        let mut out = T::nan();
        self.eval_degrees(n, point, |k, v| {
            if k == n {
                out = v;
            }
        })?;
        Ok(out)
    }
}
