//! Gauss–Legendre and Gauss–Jacobi rules.
//!
//! Nodes come from the eigenvalues of the Jacobi matrix (Golub–Welsch), are
//! polished with Newton steps on the three-term recurrence, and weights are
//! recomputed from the derivative formula at the polished nodes.

use crate::error::{Error, Result};
use crate::scalar::{c, Real};

use super::gamma::gamma_ratio;

/// Weight function of a rule on [−1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadKind {
    /// w(x) = 1.
    GaussLegendre,
    /// w(x) = (1−x)^a (1+x)^b.
    GaussJacobi { a: f64, b: f64 },
}

/// An n-point Gauss rule on [−1, 1], exact for polynomials of degree 2n−1
/// against its weight.
#[derive(Debug, Clone)]
pub struct QuadRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub kind: QuadKind,
}

impl<T: Real> QuadRule<T> {
    /// Builds the n-point rule of the given kind.
    pub fn new(kind: QuadKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("quadrature needs n >= 1".into()));
        }
        let (a, b) = match kind {
            QuadKind::GaussLegendre => (0.0, 0.0),
            QuadKind::GaussJacobi { a, b } => (a, b),
        };
        if !(a > -1.0 && b > -1.0) {
            return Err(Error::InvalidParameter(format!("Jacobi weight exponents must exceed -1, got ({a}, {b})")));
        }
        // Build in f64 and convert: the f32 rule is the rounded f64 rule.
        let (nodes, weights) = gauss_jacobi_f64(n, a, b)?;
        Ok(Self { nodes: nodes.into_iter().map(c).collect(), weights: weights.into_iter().map(c).collect(), kind })
    }

    pub fn gauss_legendre(n: usize) -> Result<Self> {
        Self::new(QuadKind::GaussLegendre, n)
    }

    pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<Self> {
        Self::new(QuadKind::GaussJacobi { a, b }, n)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ wᵢ f(xᵢ).
    pub fn integrate(&self, mut f: impl FnMut(T) -> T) -> T {
        self.nodes.iter().zip(&self.weights).fold(T::zero(), |acc, (&x, &w)| acc + w * f(x))
    }

    /// The same rule affinely moved to [lo, hi] (weights scaled by the
    /// Jacobian; the weight function moves with it).
    pub fn mapped(&self, lo: T, hi: T) -> (Vec<T>, Vec<T>) {
        let half = (hi - lo) * c(0.5);
        let mid = (hi + lo) * c(0.5);
        let nodes = self.nodes.iter().map(|&x| mid + half * x).collect();
        let weights = self.weights.iter().map(|&w| w * half).collect();
        (nodes, weights)
    }
}

/// P_n^{(a,b)}(x) and P_{n-1}^{(a,b)}(x) by the forward recurrence.
fn jacobi_pair(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    if n == 0 {
        return (p0, 0.0);
    }
    let mut p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for k in 1..n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let lhs = 2.0 * (k + 1.0) * (k + a + b + 1.0) * s;
        let p2 =
            ((s + 1.0) * ((s + 2.0) * s * x + a * a - b * b) * p1 - 2.0 * (k + a) * (k + b) * (s + 2.0) * p0) / lhs;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// P_n'(x) from P_n and P_{n-1}.
fn jacobi_derivative(n: usize, a: f64, b: f64, x: f64, pn: f64, pnm1: f64) -> f64 {
    let nn = n as f64;
    let s = 2.0 * nn + a + b;
    (nn * ((a - b) - s * x) * pn + 2.0 * (nn + a) * (nn + b) * pnm1) / (s * (1.0 - x * x))
}

fn gauss_jacobi_f64(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    // Jacobi matrix of the monic recurrence.
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for k in 0..n {
        let kk = k as f64;
        let s = 2.0 * kk + a + b;
        diag[k] = if k == 0 { (b - a) / (a + b + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
        if k + 1 < n {
            let j = kk + 1.0;
            let sj = 2.0 * j + a + b;
            let beta = if j == 1.0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
            } else {
                4.0 * j * (j + a) * (j + b) * (j + a + b) / (sj * sj * (sj + 1.0) * (sj - 1.0))
            };
            off[k] = beta.sqrt();
        }
    }
    let mu0 = 2f64.powf(a + b + 1.0) * gamma_ratio(&[a + 1.0, b + 1.0], &[a + b + 2.0])?;
    let (mut nodes, first) = symmetric_tridiagonal_eigen(diag, off)?;
    let mut gw: Vec<f64> = first.iter().map(|v| mu0 * v * v).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| nodes[i].total_cmp(&nodes[j]));
    nodes = order.iter().map(|&i| nodes[i]).collect();
    gw = order.iter().map(|&i| gw[i]).collect();

    // Newton polish and derivative-formula weights.
    // 2^{a+b+1} Γ(n+a+1)Γ(n+b+1) / (Γ(n+a+b+1) n!), accumulated as a product
    // so large n does not go through log-gamma.
    let mut norm = 2f64.powf(a + b + 1.0) * gamma_ratio(&[a + 2.0, b + 2.0], &[a + b + 2.0])?;
    for k in 2..=n {
        let k = k as f64;
        norm *= (k + a) * (k + b) / ((k + a + b) * k);
    }
    let mut weights = vec![0.0; n];
    for (i, x) in nodes.iter_mut().enumerate() {
        for _ in 0..3 {
            let (pn, pm) = jacobi_pair(n, a, b, *x);
            let dp = jacobi_derivative(n, a, b, *x, pn, pm);
            let step = pn / dp;
            if !step.is_finite() {
                break;
            }
            let candidate = *x - step;
            if candidate.abs() >= 1.0 {
                break;
            }
            *x = candidate;
            if step.abs() <= 1e-16 * x.abs().max(1e-300) {
                break;
            }
        }
        let (pn, pm) = jacobi_pair(n, a, b, *x);
        let dp = jacobi_derivative(n, a, b, *x, pn, pm);
        let w = norm / ((1.0 - *x * *x) * dp * dp);
        weights[i] = if w.is_finite() && w > 0.0 { w } else { gw[i] };
    }
    // Symmetric weights give exactly symmetric rules.
    if a == b {
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let x = 0.5 * (nodes[j] - nodes[i]);
            nodes[i] = -x;
            nodes[j] = x;
            let w = 0.5 * (weights[i] + weights[j]);
            weights[i] = w;
            weights[j] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
    }
    Ok((nodes, weights))
}

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal
/// matrix (implicit QL with Wilkinson shifts).
fn symmetric_tridiagonal_eigen(mut d: Vec<f64>, mut e: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = d.len();
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NonConvergence("tridiagonal QL iteration".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut cc = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = cc * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                cc = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * cc * b;
                p = s * r;
                d[i + 1] = g + p;
                g = cc * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + cc * zf;
                z[i] = cc * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}
