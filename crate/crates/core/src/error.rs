use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse matrix: {0}")]
    Parse(String),

    #[error("dimension {0} is not supported by this operation")]
    Dimension(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("not in M({0},Z): the characteristic polynomial is reducible over Q")]
    NotInM(usize),

    #[error("matrix is not hyperbolic")]
    NotHyperbolic,

    #[error("not a commutant member")]
    NotCommutantMember,

    #[error("bracket index {0} out of range 1..=3")]
    IndexOutOfRange(u8),

    #[error("integrality violated: {0}")]
    IntegralityViolated(String),

    #[error("norm {norm} exceeds the census cap {cap}; raise the cap to run it")]
    CapExceeded { norm: u32, cap: u32 },

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("increase radius: {0}")]
    IncreaseRadius(String),

    #[error("no independent positive units found with eigenvalues bounded by {0}")]
    UnitsNotFound(u32),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
