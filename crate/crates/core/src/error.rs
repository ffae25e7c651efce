use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the numerics engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("frequency {xi:e} rad/s lies beyond the last tabulated sample at {last:e} rad/s")]
    OutOfRange { xi: f64, last: f64 },

    #[error("divergent frequency integral: {0}")]
    Divergent(String),

    #[error(
        "quadrature did not converge after {doublings} doublings \
         (best estimate {best:e}, last difference {difference:e})"
    )]
    Convergence {
        best: f64,
        difference: f64,
        doublings: u32,
    },

    #[error("singular geometry: {0}")]
    SingularGeometry(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
