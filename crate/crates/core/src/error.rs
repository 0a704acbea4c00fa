use thiserror::Error;

/// Errors raised by the library.
///
/// Input-shape problems and violated preconditions are distinguished from
/// mathematical failures, which signal an invalid structure or a broken
/// identity; the CLI maps them to different exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("filtration is not decreasing at index {0}")]
    NonDecreasing(i64),
    #[error("filtration is not exhaustive: lowest step {0} is not the whole space")]
    NonExhaustive(i64),
    #[error("weight filtration is not increasing at index {0}")]
    NonIncreasing(i64),
    #[error("real structure is not an involution")]
    BadRealStructure,
    #[error("labels must be distinct and match the dimension")]
    BadLabels,
    #[error("matrix is singular")]
    Singular,
    #[error("opposedness fails: {0}")]
    NotOpposed(String),
    #[error("algebra is not connected: degree-0 part has dimension {0}")]
    NotConnected(usize),
    #[error("algebra is not simply connected: degree-1 part has dimension {0}")]
    NotSimplyConnected(usize),
    #[error("differential does not respect the structure: {0}")]
    NotAChainMap(String),
    #[error("wrong degree: {0}")]
    WrongDegree(String),
    #[error("truncation too small: {0}")]
    Truncation(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("identity failed: {0}")]
    IdentityFailed(String),
}

impl Error {
    /// True for failures of a mathematical identity or structure validity, as
    /// opposed to malformed input.
    pub fn is_math_failure(&self) -> bool {
        matches!(
            self,
            Error::NotOpposed(_) | Error::NotAChainMap(_) | Error::IdentityFailed(_) | Error::Singular
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
