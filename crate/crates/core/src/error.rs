use thiserror::Error;

/// Errors raised while loading data or computing scores.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// The bytes on disk do not match the declared file format.
    #[error("format error: {0}")]
    Format(String),

    /// Parsed values violate a data-model invariant (non-finite, out of range, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// Inputs too small for the quantity to be defined.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Dimension or class-count mismatch between two inputs.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A metric-specific precondition, e.g. equal set sizes.
    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
