use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A coordinate landed exactly on a kink of the L1 term.
    #[error("degenerate initialization: coordinate {coord} reaches exactly 0")]
    DegenerateInitialization { coord: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
