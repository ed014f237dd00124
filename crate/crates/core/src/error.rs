use thiserror::Error;

/// Failure modes of the toolkit.
///
/// The variants separate mathematical infeasibility (the instance has no
/// solution with the requested properties) from numerical failure (the
/// quadrature or grid could not deliver the requested accuracy).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("grid mismatch: {left} vs {right} samples")]
    GridMismatch { left: usize, right: usize },
    #[error("accuracy error: {0}")]
    Accuracy(String),
    #[error("non-integrable data: {0}")]
    Integrability(String),
    #[error("sandwich violated: lower {lower} <= value {value} <= upper {upper} fails")]
    SandwichViolation { lower: f64, value: f64, upper: f64 },
    #[error("infeasible: {reason}")]
    Infeasible { reason: String, ladder: Vec<f64> },
    #[error("ladder exhausted at r = {r}, k = {k}")]
    LadderExhausted { r: f64, k: u64 },
    #[error("no continuous logarithm: {0}")]
    NoLogarithm(String),
}

impl Error {
    /// True for failures that mean "no admissible solution" rather than
    /// "could not compute".
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible { .. } | Error::LadderExhausted { .. })
    }

    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Accuracy(_) | Error::Integrability(_) | Error::SandwichViolation { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
