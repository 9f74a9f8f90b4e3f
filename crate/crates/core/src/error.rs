use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate in input")]
    NonFinite,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("operator graph is empty")]
    EmptyOperator,

    #[error("set is empty")]
    EmptySet,

    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("operator is not monotone: {0}")]
    NotMonotone(String),

    #[error("point lies outside the set")]
    NotInSet,

    #[error("expected a cone with apex at the origin")]
    NotACone,

    #[error("unsupported representation: {0}")]
    Unsupported(String),

    #[error("graph does not cover the probe box: no sample within resolution of x = {0:?}")]
    DomainCoverage(Vec<f64>),

    #[error("infimum is unbounded below")]
    Unbounded,

    #[error("numeric failure in linear programming kernel")]
    NumericFailure,

    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
