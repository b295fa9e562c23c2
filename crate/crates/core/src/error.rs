use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {n} exceeds the configured cap {cap}")]
    DimensionCap { n: usize, cap: usize },

    #[error("bias p = {0} is outside the admissible range {1}")]
    InvalidBias(f64, &'static str),

    #[error("{name} = {value} is out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: String,
    },

    #[error("value table has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("functions live on different spaces")]
    SpaceMismatch,

    #[error("coordinate {coord} is outside 1..={n}")]
    CoordinateOutOfRange { coord: usize, n: usize },

    #[error("assignment domain does not match the restricted set")]
    AssignmentDomain,

    #[error("function is not Boolean ({{0,1}}-valued)")]
    NotBoolean,

    #[error("the zero function has no normalised influences")]
    ZeroFunction,

    #[error("function has degree {degree} > {cap}")]
    DegreeViolation { degree: usize, cap: usize },

    #[error("delta = {delta} is below the witnessed influence {witnessed}")]
    DeltaTooSmall { delta: f64, witnessed: f64 },

    #[error("invalid product space: {0}")]
    InvalidSpace(String),

    #[error("function {index} depends on coordinates outside its declared set")]
    Dependence { index: usize },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn out_of_range(name: &'static str, value: f64, expected: impl Into<String>) -> Error {
    Error::OutOfRange {
        name,
        value,
        expected: expected.into(),
    }
}
