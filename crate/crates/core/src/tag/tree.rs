use std::hash::{Hash, Hasher};

use super::address::GornAddress;
use super::error::TagError;
use super::label::{Marker, NodeLabel, Symbol};

/// Handle to a node inside one [`SyntacticTree`].
///
/// Ids are only meaningful for the tree they came from and for trees produced
/// from it by [`SyntacticTree::substitute`] / [`SyntacticTree::adjoin`]: those
/// operations keep every surviving host id and instantiate the inserted tree
/// with fresh ids `id_bound() + k` for its node `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Clone, Debug)]
struct Node {
    label: NodeLabel,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
}

/// A finite, ordered, labelled tree.
///
/// Nodes live in an arena; slots of nodes removed by an operation stay empty
/// so that the remaining ids are stable. Equality and hashing are structural
/// (labels and child order), never by id.
#[derive(Clone)]
pub struct SyntacticTree {
    slots: Vec<Option<Node>>,
    root: NodeId,
}

impl SyntacticTree {
    pub fn leaf(label: NodeLabel) -> Self {
        SyntacticTree {
            slots: vec![Some(Node {
                label,
                parent: None,
                children: Vec::new(),
            })],
            root: NodeId(0),
        }
    }

    pub fn terminal(name: impl Into<String>) -> Self {
        Self::leaf(NodeLabel::plain(Symbol::terminal(name)))
    }

    /// An internal node labelled with nonterminal `name` over `children`.
    pub fn branch(name: impl Into<String>, children: Vec<SyntacticTree>) -> Self {
        let mut tree = Self::leaf(NodeLabel::plain(Symbol::nonterminal(name)));
        for child in &children {
            let root = tree.root;
            tree.graft_copy(root, child, child.root);
        }
        tree
    }

    fn graft_copy(&mut self, parent: NodeId, src: &SyntacticTree, src_id: NodeId) {
        let id = self.push_child(parent, src.label(src_id).clone());
        for &c in src.children(src_id) {
            self.graft_copy(id, src, c);
        }
    }

    pub(crate) fn push_child(&mut self, parent: NodeId, label: NodeLabel) -> NodeId {
        let id = NodeId(self.slots.len());
        self.slots.push(Some(Node {
            label,
            parent: Some(parent),
            children: Vec::new(),
        }));
        self.node_mut(parent).children.push(id);
        id
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn root_label(&self) -> &NodeLabel {
        self.label(self.root)
    }

    fn node(&self, id: NodeId) -> &Node {
        self.slots
            .get(id.0)
            .and_then(Option::as_ref)
            .unwrap_or_else(|| panic!("node {} not in tree", id.0))
    }

    fn node_mut(&mut self, id: NodeId) -> &mut Node {
        self.slots
            .get_mut(id.0)
            .and_then(Option::as_mut)
            .unwrap_or_else(|| panic!("node {} not in tree", id.0))
    }

    pub fn contains(&self, id: NodeId) -> bool {
        matches!(self.slots.get(id.0), Some(Some(_)))
    }

    fn check(&self, id: NodeId) -> Result<&Node, TagError> {
        self.slots
            .get(id.0)
            .and_then(Option::as_ref)
            .ok_or(TagError::UnknownNode(id.0))
    }

    /// Panics if `id` is not a node of this tree.
    pub fn label(&self, id: NodeId) -> &NodeLabel {
        &self.node(id).label
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.node(id).children
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.node(id).parent
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.node(id).children.is_empty()
    }

    /// One past the largest id ever allocated in this tree.
    pub fn id_bound(&self) -> usize {
        self.slots.len()
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Live node ids in ascending order.
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_ref().map(|_| NodeId(i)))
    }

    /// All `(parent, child)` edges.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.node_ids()
            .flat_map(move |p| self.children(p).iter().map(move |&c| (p, c)))
    }

    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.slots.len());
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.children(id).iter().rev());
        }
        out
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        self.preorder()
            .into_iter()
            .filter(|&id| self.is_leaf(id))
            .collect()
    }

    /// Follows the 1-based child indices of `addr` from the root.
    pub fn node_at(&self, addr: &GornAddress) -> Result<NodeId, TagError> {
        let mut cur = self.root;
        for (depth, &idx) in addr.path().iter().enumerate() {
            let children = self.children(cur);
            cur = *children
                .get((idx as usize).wrapping_sub(1))
                .ok_or_else(|| {
                    TagError::InvalidAddress(format!(
                        "{} leaves the tree at depth {} (out-degree {})",
                        addr,
                        depth,
                        children.len()
                    ))
                })?;
        }
        Ok(cur)
    }

    pub fn address_of(&self, id: NodeId) -> GornAddress {
        let mut path = Vec::new();
        let mut cur = id;
        while let Some(p) = self.parent(cur) {
            let pos = self.children(p).iter().position(|&c| c == cur).unwrap();
            path.push(pos as u32 + 1);
            cur = p;
        }
        path.reverse();
        GornAddress::new(path).unwrap()
    }

    /// The first foot-marked node in pre-order, if any.
    pub fn foot(&self) -> Option<NodeId> {
        self.preorder()
            .into_iter()
            .find(|&id| self.label(id).is_foot())
    }

    pub fn substitution_sites(&self) -> Vec<NodeId> {
        self.leaves()
            .into_iter()
            .filter(|&id| self.label(id).is_substitution_site())
            .collect()
    }

    /// Left-to-right leaf labels with `ε` leaves dropped. Nonterminal leaves
    /// are reported by name.
    pub fn yield_tokens(&self) -> Vec<String> {
        self.leaves()
            .into_iter()
            .filter_map(|id| match &self.label(id).symbol {
                Symbol::Epsilon => None,
                s => Some(s.name().to_owned()),
            })
            .collect()
    }

    /// True iff every leaf is a terminal or `ε`.
    pub fn is_saturated(&self) -> bool {
        self.leaves()
            .into_iter()
            .all(|id| !self.label(id).symbol.is_nonterminal())
    }

    /// Copies `other` into this arena with ids shifted by the current bound;
    /// returns the shift.
    fn append(&mut self, other: &SyntacticTree) -> usize {
        let offset = self.slots.len();
        let shift = |id: NodeId| NodeId(id.0 + offset);
        self.slots.extend(other.slots.iter().map(|slot| {
            slot.as_ref().map(|n| Node {
                label: n.label.clone(),
                parent: n.parent.map(shift),
                children: n.children.iter().copied().map(shift).collect(),
            })
        }));
        offset
    }

    /// Puts `new` where `old` hangs in its parent (or makes it the root).
    fn take_position(&mut self, old: NodeId, new: NodeId) {
        let parent = self.node(old).parent;
        self.node_mut(new).parent = parent;
        match parent {
            Some(p) => {
                let siblings = &mut self.node_mut(p).children;
                let pos = siblings.iter().position(|&c| c == old).unwrap();
                siblings[pos] = new;
            }
            None => self.root = new,
        }
    }

    /// Substitutes the initial tree `initial` at leaf `v`.
    ///
    /// Defined only when `v` is a substitution-marked leaf (hence not a foot)
    /// whose label equals the label of `initial`'s root. The result contains
    /// every node of `self` except `v`, plus `initial`'s nodes with ids shifted
    /// by `self.id_bound()`.
    pub fn substitute(
        &self,
        v: NodeId,
        initial: &SyntacticTree,
    ) -> Result<SyntacticTree, TagError> {
        let node = self.check(v)?;
        let undefined = |why: String| Err(TagError::UndefinedSubstitution(why));
        if !node.children.is_empty() {
            return undefined(format!("node {} is not a leaf", self.address_of(v)));
        }
        if node.label.is_foot() {
            return undefined(format!("node {} is a foot node", self.address_of(v)));
        }
        if node.label.symbol != initial.root_label().symbol {
            return undefined(format!(
                "label `{}` at {} does not match root `{}`",
                node.label.symbol,
                self.address_of(v),
                initial.root_label().symbol
            ));
        }
        if !node.label.is_substitution_site() {
            return undefined(format!(
                "node {} is not marked for substitution",
                self.address_of(v)
            ));
        }
        if initial.foot().is_some() {
            return undefined("an auxiliary tree cannot be substituted".into());
        }
        let mut out = self.clone();
        let offset = out.append(initial);
        let new_root = NodeId(initial.root.0 + offset);
        out.take_position(v, new_root);
        out.slots[v.0] = None;
        Ok(out)
    }

    /// Adjoins the auxiliary tree `aux` at internal node `v`.
    ///
    /// `v` is excised, `aux` takes its place and `v`'s former children hang
    /// below `aux`'s foot, whose marker is cleared. Ids follow the same rule
    /// as [`SyntacticTree::substitute`].
    pub fn adjoin(&self, v: NodeId, aux: &SyntacticTree) -> Result<SyntacticTree, TagError> {
        let node = self.check(v)?;
        let undefined = |why: String| Err(TagError::UndefinedAdjunction(why));
        if node.children.is_empty() {
            return undefined(format!("node {} is a leaf", self.address_of(v)));
        }
        if node.label.symbol != aux.root_label().symbol {
            return undefined(format!(
                "label `{}` at {} does not match root `{}`",
                node.label.symbol,
                self.address_of(v),
                aux.root_label().symbol
            ));
        }
        let Some(foot) = aux.foot() else {
            return undefined("tree to adjoin has no foot node".into());
        };
        let mut out = self.clone();
        let offset = out.append(aux);
        let new_root = NodeId(aux.root.0 + offset);
        let new_foot = NodeId(foot.0 + offset);
        out.take_position(v, new_root);
        let moved = std::mem::take(&mut out.node_mut(v).children);
        for &c in &moved {
            out.node_mut(c).parent = Some(new_foot);
        }
        let foot_node = out.node_mut(new_foot);
        foot_node.children = moved;
        foot_node.label.marker = Marker::None;
        out.slots[v.0] = None;
        Ok(out)
    }

    /// A copy with ids renumbered densely in pre-order.
    pub fn compact(&self) -> SyntacticTree {
        let mut out = SyntacticTree::leaf(self.root_label().clone());
        for &c in self.children(self.root) {
            let root = out.root;
            out.graft_copy(root, self, c);
        }
        out
    }

    fn structurally_equal(&self, a: NodeId, other: &SyntacticTree, b: NodeId) -> bool {
        let (na, nb) = (self.node(a), other.node(b));
        na.label == nb.label
            && na.children.len() == nb.children.len()
            && na
                .children
                .iter()
                .zip(&nb.children)
                .all(|(&ca, &cb)| self.structurally_equal(ca, other, cb))
    }
}

impl PartialEq for SyntacticTree {
    fn eq(&self, other: &Self) -> bool {
        self.structurally_equal(self.root, other, other.root)
    }
}

impl Eq for SyntacticTree {}

impl Hash for SyntacticTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for id in self.preorder() {
            let n = self.node(id);
            n.label.hash(state);
            n.children.len().hash(state);
        }
    }
}

impl std::fmt::Debug for SyntacticTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SyntacticTree({})", self)
    }
}
