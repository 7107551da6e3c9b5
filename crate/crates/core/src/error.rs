use alloc::string::String;

/// Errors raised by the engine.
///
/// Verdict-returning checks (homomorphism verification, pair validation,
/// identity checks) do not use this type; they return certificates or
/// counterexamples instead.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("input too large: {0}")]
    InputTooLarge(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("base field mismatch: {0}")]
    FieldMismatch(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("algebra axiom violated: {0}")]
    Axiom(String),
    #[error("not an involution: {0}")]
    NotInvolution(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("saturation did not stabilize: {0}")]
    Saturation(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("search budget exhausted: {0}")]
    SearchExhausted(String),
    #[error("case not covered: {0}")]
    NotCovered(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => { $crate::error::Error::Invalid(alloc::format!($($arg)*)) };
}
pub(crate) use invalid;
