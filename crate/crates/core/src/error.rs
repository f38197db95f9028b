use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A fractional order or other real parameter outside its valid interval.
    #[error("{name} = {value} is outside the valid interval {interval}")]
    Domain {
        name: &'static str,
        value: f64,
        interval: &'static str,
    },

    #[error("size mismatch: {0}")]
    Size(String),

    #[error("matrix is numerically singular: {0}")]
    Singular(String),

    /// Conjugate gradients met a direction with non-positive curvature.
    #[error("operator is not positive definite: curvature {curvature:e} at iteration {iteration}")]
    Definiteness { iteration: usize, curvature: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("solver did not converge: {0}")]
    NotConverged(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
