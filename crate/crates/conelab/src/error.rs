use thiserror::Error;

/// Unified error type for every operation in the crate.
///
/// The variants split along how a caller should react: `Parse` and
/// `InvalidParameter` are usage errors, `CapExceeded` / `Truncated` mean the
/// computation was cut off and the answer is indeterminate, and the remaining
/// variants are verified mathematical refusals.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Malformed textual input; the message includes the offending line.
    #[error("parse error: {0}")]
    Parse(String),

    /// An argument violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A configured resource bound was hit before the answer was determined.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    /// An enumeration was truncated upstream, so an exact answer downstream is
    /// impossible.
    #[error("refusing truncated input: {0}")]
    Truncated(String),

    /// A formula degenerates at these parameters (division by zero in a
    /// closed form), so the requested object does not exist.
    #[error("singular parameter: {0}")]
    Singular(String),

    /// Parameters fall outside the hypotheses of the closed-form value.
    #[error("outside theorem hypotheses: {0}")]
    OutOfScope(String),

    /// Input data fails a semantic precondition that was checked exactly
    /// (e.g. a supplied certificate is not optimal for its graph).
    #[error("refused: {0}")]
    Refused(String),

    /// A constructed family has a negative weight at the given index, so it
    /// is not a fractional colouring; happens for admissible-looking
    /// parameters, hence a first-class error rather than a panic.
    #[error("construction yields negative weight at index {index}: {value}")]
    NegativeWeight { index: usize, value: String },
}
