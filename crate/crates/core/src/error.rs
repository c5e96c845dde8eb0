use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request would exceed a hard resource limit (window size, integer width, panel budget).
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge: estimated error {estimate:.3e} > tolerance {tol:.3e}")]
    NoConvergence { estimate: f64, tol: f64 },

    /// Exact rational arithmetic overflowed 64-bit storage.
    #[error("rational overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid TAU1 cache: {0}")]
    Cache(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
