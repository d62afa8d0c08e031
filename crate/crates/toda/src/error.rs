use thiserror::Error;

/// Errors produced by the lattice, matrix and field operations.
#[derive(Debug, Error)]
pub enum TodaError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("nonpositive off-diagonal entry b[{index}] = {value}")]
    NonpositiveB { index: usize, value: f64 },

    #[error("range error: {0}")]
    Range(String),

    #[error("non-finite state encountered at t = {t}")]
    NonFinite { t: f64 },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("scheme mismatch: {0}")]
    SchemeMismatch(String),

    #[error("instability: field sup-norm doubled within one step at t = {t}")]
    Instability { t: f64 },

    #[error("insufficient samples: got {got}, need at least {need}")]
    InsufficientSamples { got: usize, need: usize },

    #[error("invalid run spec: {0}")]
    InvalidSpec(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
