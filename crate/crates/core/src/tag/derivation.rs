use std::collections::BTreeMap;
use std::fmt;

use super::address::GornAddress;
use super::error::TagError;
use super::grammar::{Grammar, TreeKind};
use super::tree::SyntacticTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Operation {
    Substitution,
    Adjunction,
}

impl Operation {
    pub fn keyword(self) -> &'static str {
        match self {
            Operation::Substitution => "sub",
            Operation::Adjunction => "adj",
        }
    }

    fn expected_kind(self) -> TreeKind {
        match self {
            Operation::Substitution => TreeKind::Initial,
            Operation::Adjunction => TreeKind::Auxiliary,
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attachment {
    pub op: Operation,
    pub child: Derivation,
}

/// A derivation tree: which elementary trees were combined, where, and how.
///
/// Every edge is keyed by a Gorn address into the *original* elementary tree
/// of its parent, so a parent carries at most one operation per address.
/// Repeated adjunction at one site is expressed as a chain: the next tree
/// adjoins at the root of the previously adjoined one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Derivation {
    tree: String,
    edges: BTreeMap<GornAddress, Attachment>,
}

impl Derivation {
    pub fn new(tree: impl Into<String>) -> Self {
        Derivation {
            tree: tree.into(),
            edges: BTreeMap::new(),
        }
    }

    pub fn tree_name(&self) -> &str {
        &self.tree
    }

    /// Edges in address order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = (&GornAddress, &Attachment)> {
        self.edges.iter()
    }

    pub fn edge(&self, address: &GornAddress) -> Option<&Attachment> {
        self.edges.get(address)
    }

    pub fn edge_mut(&mut self, address: &GornAddress) -> Option<&mut Attachment> {
        self.edges.get_mut(address)
    }

    pub fn attach(
        &mut self,
        op: Operation,
        address: GornAddress,
        child: Derivation,
    ) -> Result<(), TagError> {
        if self.edges.contains_key(&address) {
            return Err(TagError::DuplicateAddress(address));
        }
        self.edges.insert(address, Attachment { op, child });
        Ok(())
    }

    /// Builder form of [`Derivation::attach`]; panics on a repeated address.
    pub fn with(mut self, op: Operation, address: GornAddress, child: Derivation) -> Self {
        self.attach(op, address, child)
            .expect("address used twice in one derivation node");
        self
    }

    pub fn adjoin(self, address: &str, child: Derivation) -> Self {
        self.with(
            Operation::Adjunction,
            address.parse().expect("bad address"),
            child,
        )
    }

    pub fn substitute(self, address: &str, child: Derivation) -> Self {
        self.with(
            Operation::Substitution,
            address.parse().expect("bad address"),
            child,
        )
    }

    /// Total number of operations (edges) in the whole tree.
    pub fn operation_count(&self) -> usize {
        self.edges
            .values()
            .map(|a| 1 + a.child.operation_count())
            .sum()
    }

    /// Number of elementary-tree nodes.
    pub fn node_count(&self) -> usize {
        1 + self.operation_count()
    }

    /// Pre-order walk over every derivation node.
    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let node = out[i];
            out.extend(node.edges.values().map(|a| &a.child));
            i += 1;
        }
        out
    }

    /// Evaluates the derivation to its derived tree.
    ///
    /// The root must name an initial tree rooted in the start symbol. Children
    /// are applied post-order, in address order.
    pub fn derive(&self, g: &Grammar) -> Result<SyntacticTree, TagError> {
        self.derive_with_order(g, &mut |d: &Derivation| (0..d.edges.len()).collect())
    }

    /// Like [`Derivation::derive`] but applies the children of each node in
    /// the order returned by `order` (a permutation of `0..edges().len()`).
    pub fn derive_with_order<F>(
        &self,
        g: &Grammar,
        order: &mut F,
    ) -> Result<SyntacticTree, TagError>
    where
        F: FnMut(&Derivation) -> Vec<usize>,
    {
        match g.lookup(&self.tree) {
            Some(et) if et.kind() == TreeKind::Initial && et.root_symbol().name() == g.start() => {}
            Some(_) => return Err(TagError::BadDerivationRoot(self.tree.clone())),
            None => return Err(TagError::DanglingReference(self.tree.clone())),
        }
        Ok(self.derive_node(g, order)?.compact())
    }

    fn derive_node<F>(&self, g: &Grammar, order: &mut F) -> Result<SyntacticTree, TagError>
    where
        F: FnMut(&Derivation) -> Vec<usize>,
    {
        let et = g
            .lookup(&self.tree)
            .ok_or_else(|| TagError::DanglingReference(self.tree.clone()))?;
        let original = et.tree();
        let mut pending = Vec::with_capacity(self.edges.len());
        for (address, attachment) in &self.edges {
            let child = &attachment.child;
            let fail = |reason: String| TagError::InapplicableOperation {
                op: attachment.op.keyword(),
                parent: self.tree.clone(),
                child: child.tree.clone(),
                address: address.clone(),
                reason,
            };
            let child_et = g
                .lookup(&child.tree)
                .ok_or_else(|| TagError::DanglingReference(child.tree.clone()))?;
            if child_et.kind() != attachment.op.expected_kind() {
                return Err(fail(format!(
                    "`{}` is an {} tree",
                    child.tree,
                    child_et.kind()
                )));
            }
            let site = original.node_at(address).map_err(|e| fail(e.to_string()))?;
            let derived = child.derive_node(g, order)?;
            pending.push((site, attachment.op, derived, fail));
        }

        let permutation = order(self);
        debug_assert_eq!(permutation.len(), pending.len());
        let mut slots: Vec<_> = pending.into_iter().map(Some).collect();
        let mut host = original.clone();
        for i in permutation {
            let (site, op, derived, fail) = slots[i].take().expect("order is not a permutation");
            host = match op {
                Operation::Substitution => host.substitute(site, &derived),
                Operation::Adjunction => host.adjoin(site, &derived),
            }
            .map_err(|e| fail(e.to_string()))?;
        }
        Ok(host)
    }
}
