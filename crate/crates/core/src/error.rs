use thiserror::Error;

/// Errors raised by the time-frequency and operator routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("modulus mismatch: expected {expected:?}, found {found:?}")]
    ModulusMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    #[error("step {step} does not divide modulus {modulus}")]
    NotASubgroup { modulus: usize, step: usize },
    #[error("expected {expected} values, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands live on different sides (time vs. frequency)")]
    SideMismatch,
    #[error("phase-space functions live on different domains")]
    DomainMismatch,
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("window is identically zero")]
    ZeroWindow,
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("weight is not moderate: ratio {observed} exceeds declared constant {constant}")]
    NotModerate { observed: f64, constant: f64 },
    #[error("invalid exponent {0}; expected a value in [1, inf]")]
    InvalidExponent(f64),
    #[error("Gabor system is not a frame (lower bound {lower:e}, upper bound {upper:e})")]
    NotAFrame { lower: f64, upper: f64 },
    #[error("matrix is singular (smallest singular value {smallest:e}, threshold {threshold:e})")]
    Singular { smallest: f64, threshold: f64 },
    #[error("rank decision is ambiguous: singular value {value:e} lies within a decade of threshold {threshold:e}")]
    RankAmbiguous { value: f64, threshold: f64 },
    #[error("operation requires a single cyclic factor, group has {0}")]
    MultiFactorGroup(usize),
    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Csv(err.to_string())
    }
}
