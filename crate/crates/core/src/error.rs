use thiserror::Error;

/// Errors raised by evaluation, quadrature and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("series did not converge within {terms} terms")]
    NoConvergence { terms: usize },
    #[error("degenerate root: {0}")]
    DegenerateRoot(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tol:e}")]
    QuadFailure { estimate: f64, tol: f64 },
    #[error("Laplace tail {tail:e} beyond u_max = {u_max} exceeds tolerance")]
    TailTooFat { tail: f64, u_max: f64 },
    #[error("only {valid} of {trials} draws satisfied the predicate")]
    InsufficientSamples { valid: usize, trials: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Pole(_) => "pole",
            Error::NoConvergence { .. } => "no_convergence",
            Error::DegenerateRoot(_) => "degenerate_root",
            Error::NonFinite(_) => "non_finite",
            Error::QuadFailure { .. } => "quad_failure",
            Error::TailTooFat { .. } => "tail_too_fat",
            Error::InsufficientSamples { .. } => "insufficient_samples",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
