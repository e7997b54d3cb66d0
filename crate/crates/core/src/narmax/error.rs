use thiserror::Error;

use crate::model::ModelError;
use crate::tag::TagError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NarmaxError {
    #[error(transparent)]
    Tag(#[from] TagError),

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error("derived tree is not saturated")]
    NotSaturated,

    #[error("yield not in language at token {index}: {msg}")]
    YieldNotInLanguage { index: usize, msg: String },

    #[error("signal in wrong part: {0}")]
    SignalInWrongPart(String),

    #[error("model cannot be represented: {0}")]
    Unrepresentable(String),
}
