use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("causality violation: {0}")]
    CausalityViolation(String),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("signal not allowed here: {0}")]
    SignalNotAllowed(String),
}
