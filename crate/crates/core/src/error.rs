use thiserror::Error;

/// Errors raised by evaluation, quadrature and solver routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),
    #[error("result overflows f64: {0}")]
    Overflow(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series did not converge within {terms} terms")]
    NoConvergence { terms: usize },
    #[error("series outside its convergence domain: {0}")]
    ConvergenceDomain(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("Laplace tail bound not met for any T <= {t_max}")]
    Tail { t_max: f64 },
    #[error("outside the validity region of the transform pair: {0}")]
    Validity(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("no reduction identity for gamma = {0} (supported: 1, 2, 3)")]
    UnsupportedReduction(f64),
    #[error("divergent density shape: {0}")]
    Divergence(String),
}

impl Error {
    /// Process exit code for the command-line tool: 2 for usage and domain
    /// problems, 3 for numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoConvergence { .. } | Error::Quadrature(_) | Error::Tail { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
