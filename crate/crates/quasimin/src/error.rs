use thiserror::Error;

/// Failure modes shared across the crate.
///
/// `Domain` covers argument values outside an operation's mathematical
/// domain, `Convergence` covers iterative schemes that exhaust their budget
/// (root brackets, adaptive quadrature depth), and `GridMismatch` covers
/// piecewise-linear operands living on different grids.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }

    pub fn grid_mismatch(msg: impl Into<String>) -> Self {
        Error::GridMismatch(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
