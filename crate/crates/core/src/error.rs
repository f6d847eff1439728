use thiserror::Error;

/// Errors raised by the numerical kernels.
///
/// Scalar payloads are stored as `f64` regardless of the working precision so
/// that the error type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("hypergeometric parameter pole: {0}")]
    ParameterPole(String),

    #[error("series did not converge: {0}")]
    NonConvergence(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("evaluation at singular point {0} (too close to a support boundary)")]
    SingularPoint(f64),

    #[error("inadmissible fractional exponent {exponent} for {family}")]
    InadmissibleExponent { family: String, exponent: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid collocation grid: {0}")]
    Grid(String),

    #[error("evaluation failed at point {point}, column {column}: {source}")]
    Assembly { point: usize, column: usize, source: Box<Error> },

    #[error("SVD did not converge within {0} sweeps")]
    Svd(usize),

    #[error("unknown Butcher tableau `{0}`")]
    UnknownTableau(String),

    #[error("invalid Butcher tableau: {0}")]
    Tableau(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
