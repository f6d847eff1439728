//! Special functions and quadrature.

mod gamma;
mod hypergeometric;
mod quadrature;

pub(crate) use gamma::gamma_ratio;
pub use gamma::{
    cos_pi, digamma, factorial, gamma, is_nonpositive_integer, ln_gamma, ln_gamma_sign, pochhammer, rgamma, sin_pi,
};
pub use hypergeometric::{hyp1f1, hyp2f1, DEGENERATE_TOL, Z_SWITCH};
pub use quadrature::{QuadKind, QuadRule};
