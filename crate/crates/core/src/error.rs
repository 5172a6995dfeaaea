use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot parse {text:?} as a rational: {reason}")]
    Parse { text: String, reason: &'static str },

    /// A point outside the open positive orthant, a pole, or a parameter
    /// outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported dimension k={k}: {what}")]
    UnsupportedDimension { k: usize, what: &'static str },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("no root found: {0}")]
    NotFound(String),

    #[error("adaptive step size underflow at t={t}")]
    StepUnderflow { t: f64 },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
