use thiserror::Error;

use super::address::GornAddress;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TagError {
    #[error("invalid address: {0}")]
    InvalidAddress(String),

    #[error("address {0} already carries an operation")]
    DuplicateAddress(GornAddress),

    #[error("no node with id {0}")]
    UnknownNode(usize),

    #[error("substitution undefined: {0}")]
    UndefinedSubstitution(String),

    #[error("adjunction undefined: {0}")]
    UndefinedAdjunction(String),

    #[error("unknown elementary tree `{0}`")]
    DanglingReference(String),

    #[error("cannot apply {op} of `{child}` at {address} in `{parent}`: {reason}")]
    InapplicableOperation {
        op: &'static str,
        parent: String,
        child: String,
        address: GornAddress,
        reason: String,
    },

    #[error("derivation root `{0}` is not an initial tree rooted in the start symbol")]
    BadDerivationRoot(String),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}
