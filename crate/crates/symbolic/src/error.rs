use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("division by a zero polynomial")]
    DivisionByZero,
    #[error("chart mismatch: `{left}` vs `{right}`")]
    ChartMismatch { left: String, right: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("no substitution given for `{0}`")]
    MissingSubstitution(String),
    #[error("expected {expected} components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("expected a scalar expression, found a form of degree {0}")]
    NotScalar(usize),
}
