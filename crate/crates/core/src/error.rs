use thiserror::Error;

/// Errors raised by the secrecy-capacity library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (relative asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (minimum eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is numerically singular (smallest eigenvalue {0:.3e})")]
    Singular(f64),

    #[error("channel is not degraded (minimum eigenvalue of the difference Gram matrix {0:.3e})")]
    NotDegraded(f64),

    #[error("the eavesdropper channel has an empty null space")]
    NullSpaceEmpty,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("initial point is infeasible: {0}")]
    InfeasibleStart(String),

    #[error("no feasible iterate found after {0} iterations")]
    Infeasible(usize),

    #[error("zero-norm input to {0}")]
    ZeroNorm(&'static str),

    #[error("empty input to {0}")]
    Empty(&'static str),

    #[error("malformed data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
