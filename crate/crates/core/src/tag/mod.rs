//! Generic tree adjoining grammar machinery: trees, Gorn addresses,
//! substitution, adjunction, derivation trees and their text formats.

mod address;
mod derivation;
mod error;
mod grammar;
mod label;
mod text;
mod tree;

pub use address::GornAddress;
pub use derivation::{Attachment, Derivation, Operation};
pub use error::TagError;
pub use grammar::{Diagnostic, ElementaryTree, Grammar, TreeKind};
pub use label::{Marker, NodeLabel, Symbol};
pub use tree::{NodeId, SyntacticTree};

/// Free-function form of [`SyntacticTree::node_at`].
pub fn node_at(tree: &SyntacticTree, addr: &GornAddress) -> Result<NodeId, TagError> {
    tree.node_at(addr)
}

/// Free-function form of [`Grammar::validate`].
pub fn validate_grammar(g: &Grammar) -> Vec<Diagnostic> {
    g.validate()
}
