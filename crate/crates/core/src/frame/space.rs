use crate::error::{Error, Result};
use crate::scalar::Real;

use super::family::{BasisFamily, Point};

/// 𝓛 = Σ λ_k (−Δ)^{s_k}; an exponent of 0 is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec<T> {
    pub terms: Vec<(T, T)>,
}

impl<T: Real> OperatorSpec<T> {
    pub fn new(terms: Vec<(T, T)>) -> Result<Self> {
        for &(lambda, s) in &terms {
            if !lambda.is_finite() || !(s >= -T::one() && s <= T::one()) {
                return Err(Error::InvalidParameter(format!(
                    "operator term ({}, {}) is not admissible",
                    lambda.as_f64(),
                    s.as_f64()
                )));
            }
        }
        Ok(Self { terms })
    }

    pub fn identity() -> Self {
        Self { terms: vec![(T::one(), T::zero())] }
    }

    /// (−Δ)^s alone.
    pub fn fractional(s: T) -> Self {
        Self { terms: vec![(T::one(), s)] }
    }

    /// I + (−Δ)^s.
    pub fn identity_plus(s: T) -> Self {
        Self { terms: vec![(T::one(), T::zero()), (T::one(), s)] }
    }
}

/// An ordered, truncated concatenation of families.
///
/// Columns follow a degree-major order: for d = 0, 1, 2, … first every
/// extended family holding degree d (in declaration order), then every
/// weighted family. The first `n_columns` entries of that order are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct SumSpace<T> {
    families: Vec<BasisFamily<T>>,
    columns: Vec<(usize, usize)>,
}

impl<T: Real> SumSpace<T> {
    pub fn new(families: Vec<BasisFamily<T>>, n_columns: usize) -> Result<Self> {
        if families.is_empty() {
            return Err(Error::InvalidParameter("a sum space needs at least one family".into()));
        }
        let dim = families[0].dim();
        if families.iter().any(|f| f.dim() != dim) {
            return Err(Error::InvalidParameter("families of mixed dimension".into()));
        }
        let order: Vec<usize> = (0..families.len())
            .filter(|&i| families[i].kind.is_extended())
            .chain((0..families.len()).filter(|&i| !families[i].kind.is_extended()))
            .collect();
        let mut columns = Vec::with_capacity(n_columns);
        let mut d = 0;
        while columns.len() < n_columns {
            for &f in &order {
                if columns.len() == n_columns {
                    break;
                }
                if d >= families[f].degree_offset {
                    columns.push((f, d));
                }
            }
            d += 1;
        }
        Ok(Self { families, columns })
    }

    /// Every family truncated below degree `n_per_family`.
    pub fn per_family(families: Vec<BasisFamily<T>>, n_per_family: usize) -> Result<Self> {
        let n = families.iter().map(|f| n_per_family.saturating_sub(f.degree_offset)).sum();
        Self::new(families, n)
    }

    pub fn families(&self) -> &[BasisFamily<T>] {
        &self.families
    }

    pub fn dim(&self) -> usize {
        self.families[0].dim()
    }

    /// Column count N.
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// (family index, degree) of every column.
    pub fn columns(&self) -> &[(usize, usize)] {
        &self.columns
    }

    /// The first `n` columns of the same ordering.
    pub fn truncated(&self, n: usize) -> Self {
        Self { families: self.families.clone(), columns: self.columns[..n.min(self.columns.len())].to_vec() }
    }

    /// Highest degree used per family (`None` when a family has no column).
    pub fn max_degrees(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.families.len()];
        for &(f, d) in &self.columns {
            out[f] = Some(out[f].map_or(d, |m: usize| m.max(d)));
        }
        out
    }

    /// Column index of every (family, degree) pair.
    pub(crate) fn column_lookup(&self) -> Vec<Vec<Option<usize>>> {
        let maxd = self.max_degrees();
        let mut lookup: Vec<Vec<Option<usize>>> = maxd.iter().map(|m| vec![None; m.map_or(0, |d| d + 1)]).collect();
        for (j, &(f, d)) in self.columns.iter().enumerate() {
            lookup[f][d] = Some(j);
        }
        lookup
    }

    /// The identity image of this space.
    pub fn as_image(&self) -> OperatorImage<T> {
        OperatorImage { space: self.clone(), parts: self.families.iter().map(|&f| vec![(T::one(), f)]).collect() }
    }

    /// S(x) · coeffs.
    pub fn evaluate(&self, coeffs: &[T], point: Point<T>) -> Result<T> {
        self.as_image().evaluate(coeffs, point)
    }
}

/// 𝓛 applied to each family of a space, as a list of (coefficient, family)
/// per source family. Column j of the image is Σ coef · family(degree of j).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorImage<T> {
    space: SumSpace<T>,
    parts: Vec<Vec<(T, BasisFamily<T>)>>,
}

impl<T: Real> OperatorImage<T> {
    pub fn space(&self) -> &SumSpace<T> {
        &self.space
    }

    /// Image terms of source family `f`.
    pub fn parts(&self, f: usize) -> &[(T, BasisFamily<T>)] {
        &self.parts[f]
    }

    /// The image of the first `n` columns.
    pub fn truncated(&self, n: usize) -> Self {
        Self { space: self.space.truncated(n), parts: self.parts.clone() }
    }

    /// Applies `op` on top of this image.
    pub fn apply(&self, op: &OperatorSpec<T>) -> Result<Self> {
        let mut parts = Vec::with_capacity(self.parts.len());
        for fam_parts in &self.parts {
            let mut merged: Vec<(T, BasisFamily<T>)> = Vec::new();
            for &(coef, fam) in fam_parts {
                for &(lambda, t) in &op.terms {
                    let (factor, image) = fam.shifted(t)?;
                    let value = coef * lambda * factor;
                    match merged.iter_mut().find(|(_, g)| g.approx_eq(&image)) {
                        Some(entry) => entry.0 = entry.0 + value,
                        None => merged.push((value, image)),
                    }
                }
            }
            merged.retain(|(coef, _)| *coef != T::zero());
            parts.push(merged);
        }
        Ok(Self { space: self.space.clone(), parts })
    }

    /// Row of the image matrix at one point.
    pub fn eval_row(&self, point: Point<T>, lookup: &[Vec<Option<usize>>], row: &mut [T]) -> Result<()> {
        for x in row.iter_mut() {
            *x = T::zero();
        }
        for (f, fam_parts) in self.parts.iter().enumerate() {
            let slots = &lookup[f];
            if slots.is_empty() {
                continue;
            }
            let n_max = slots.len() - 1;
            for &(coef, fam) in fam_parts {
                fam.eval_degrees(n_max, point, |n, v| {
                    if let Some(j) = slots[n] {
                        row[j] = row[j] + coef * v;
                    }
                })
                .map_err(|e| Error::Assembly {
                    point: usize::MAX,
                    column: slots.iter().flatten().next().copied().unwrap_or(0),
                    source: Box::new(e),
                })?;
            }
        }
        Ok(())
    }

    /// (𝓛S)(x) · coeffs.
    pub fn evaluate(&self, coeffs: &[T], point: Point<T>) -> Result<T> {
        if coeffs.len() != self.space.len() {
            return Err(Error::Shape(format!("{} coefficients for {} columns", coeffs.len(), self.space.len())));
        }
        let lookup = self.space.column_lookup();
        let mut row = vec![T::zero(); coeffs.len()];
        self.eval_row(point, &lookup, &mut row).map_err(|e| match e {
            Error::Assembly { source, .. } => *source,
            other => other,
        })?;
        Ok(row.iter().zip(coeffs).fold(T::zero(), |acc, (&a, &b)| acc + a * b))
    }
}

/// 𝓛 applied to every column of `space`.
pub fn operator_image<T: Real>(space: &SumSpace<T>, op: &OperatorSpec<T>) -> Result<OperatorImage<T>> {
    space.as_image().apply(op)
}
