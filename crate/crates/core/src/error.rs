use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "quadrature did not converge: achieved error estimate {achieved:e}, requested {requested:e}"
    )]
    QuadratureFailure { achieved: f64, requested: f64 },

    #[error("slope fit rejected: {0}")]
    SlopeFit(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
