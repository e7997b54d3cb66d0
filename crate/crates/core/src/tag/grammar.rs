use std::collections::HashSet;
use std::fmt;

use indexmap::IndexSet;

use super::address::GornAddress;
use super::label::{Marker, Symbol};
use super::tree::SyntacticTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TreeKind {
    Initial,
    Auxiliary,
}

impl fmt::Display for TreeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TreeKind::Initial => "initial",
            TreeKind::Auxiliary => "auxiliary",
        })
    }
}

/// A named initial or auxiliary tree of a grammar catalog.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryTree {
    name: String,
    kind: TreeKind,
    tree: SyntacticTree,
}

impl ElementaryTree {
    pub fn new(name: impl Into<String>, kind: TreeKind, tree: SyntacticTree) -> Self {
        ElementaryTree {
            name: name.into(),
            kind,
            tree,
        }
    }

    pub fn initial(name: impl Into<String>, tree: SyntacticTree) -> Self {
        Self::new(name, TreeKind::Initial, tree)
    }

    pub fn auxiliary(name: impl Into<String>, tree: SyntacticTree) -> Self {
        Self::new(name, TreeKind::Auxiliary, tree)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn tree(&self) -> &SyntacticTree {
        &self.tree
    }

    pub fn root_symbol(&self) -> &Symbol {
        &self.tree.root_label().symbol
    }
}

/// A tree adjoining grammar `(N, T, S, I, A)`.
///
/// Construction does not enforce the grammar invariants; run
/// [`Grammar::validate`] to get a list of violations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    nonterminals: IndexSet<String>,
    terminals: IndexSet<String>,
    start: String,
    initials: Vec<ElementaryTree>,
    auxiliaries: Vec<ElementaryTree>,
}

impl Grammar {
    pub fn new<N, T>(nonterminals: N, terminals: T, start: impl Into<String>) -> Self
    where
        N: IntoIterator,
        N::Item: Into<String>,
        T: IntoIterator,
        T::Item: Into<String>,
    {
        Grammar {
            nonterminals: nonterminals.into_iter().map(Into::into).collect(),
            terminals: terminals.into_iter().map(Into::into).collect(),
            start: start.into(),
            initials: Vec::new(),
            auxiliaries: Vec::new(),
        }
    }

    /// Adds a tree to the catalog matching its kind.
    pub fn add(&mut self, tree: ElementaryTree) {
        match tree.kind {
            TreeKind::Initial => self.initials.push(tree),
            TreeKind::Auxiliary => self.auxiliaries.push(tree),
        }
    }

    pub fn with(mut self, tree: ElementaryTree) -> Self {
        self.add(tree);
        self
    }

    pub fn nonterminals(&self) -> &IndexSet<String> {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &IndexSet<String> {
        &self.terminals
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn initials(&self) -> &[ElementaryTree] {
        &self.initials
    }

    pub fn auxiliaries(&self) -> &[ElementaryTree] {
        &self.auxiliaries
    }

    pub fn elementary_trees(&self) -> impl Iterator<Item = &ElementaryTree> {
        self.initials.iter().chain(&self.auxiliaries)
    }

    pub fn lookup(&self, name: &str) -> Option<&ElementaryTree> {
        self.elementary_trees().find(|t| t.name == name)
    }

    /// Same grammar with the auxiliary catalog cut down to `keep`.
    pub fn restrict_auxiliaries(&self, keep: &[&str]) -> Grammar {
        let mut out = self.clone();
        out.auxiliaries.retain(|t| keep.contains(&t.name.as_str()));
        out
    }

    /// Checks every grammar and elementary-tree invariant. Empty means valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if !self.nonterminals.contains(&self.start) {
            out.push(Diagnostic::StartNotNonterminal {
                start: self.start.clone(),
            });
        }
        for sym in self.nonterminals.intersection(&self.terminals) {
            out.push(Diagnostic::AlphabetsOverlap {
                symbol: sym.clone(),
            });
        }
        let mut seen = HashSet::new();
        for et in self.elementary_trees() {
            if !seen.insert(et.name.as_str()) {
                out.push(Diagnostic::DuplicateTreeName {
                    tree: et.name.clone(),
                });
            }
            self.check_tree(et, &mut out);
        }
        out
    }

    fn check_tree(&self, et: &ElementaryTree, out: &mut Vec<Diagnostic>) {
        let t = &et.tree;
        let at = |id| (et.name.clone(), t.address_of(id));
        let mut feet = Vec::new();
        for id in t.preorder() {
            let label = t.label(id);
            let in_alphabet = match &label.symbol {
                Symbol::Nonterminal(s) => self.nonterminals.contains(s),
                Symbol::Terminal(s) => self.terminals.contains(s),
                Symbol::Epsilon => true,
            };
            if !in_alphabet {
                let (tree, address) = at(id);
                out.push(Diagnostic::SymbolOutsideAlphabet {
                    tree,
                    address,
                    symbol: label.symbol.name().to_owned(),
                });
            }
            if !t.is_leaf(id) && !label.symbol.is_nonterminal() {
                let (tree, address) = at(id);
                out.push(Diagnostic::InternalNotNonterminal { tree, address });
            }
            if label.marker != Marker::None {
                if !label.symbol.is_nonterminal() {
                    let (tree, address) = at(id);
                    out.push(Diagnostic::MarkerOnNonNonterminal { tree, address });
                }
                if !t.is_leaf(id) {
                    let (tree, address) = at(id);
                    out.push(Diagnostic::MarkerOnInternal { tree, address });
                }
            }
            if label.is_foot() {
                feet.push(id);
            }
        }
        match (et.kind, feet.as_slice()) {
            (TreeKind::Auxiliary, []) => out.push(Diagnostic::AuxiliaryWithoutFoot {
                tree: et.name.clone(),
            }),
            (TreeKind::Auxiliary, [foot, rest @ ..]) => {
                if t.label(*foot).symbol != t.root_label().symbol {
                    let (tree, address) = at(*foot);
                    out.push(Diagnostic::FootLabelMismatch { tree, address });
                }
                for &extra in rest {
                    let (tree, address) = at(extra);
                    out.push(Diagnostic::MultipleFeet { tree, address });
                }
            }
            (TreeKind::Initial, feet) => {
                for &f in feet {
                    let (tree, address) = at(f);
                    out.push(Diagnostic::InitialWithFoot { tree, address });
                }
            }
        }
    }
}

/// One grammar invariant violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    StartNotNonterminal {
        start: String,
    },
    AlphabetsOverlap {
        symbol: String,
    },
    DuplicateTreeName {
        tree: String,
    },
    SymbolOutsideAlphabet {
        tree: String,
        address: GornAddress,
        symbol: String,
    },
    InternalNotNonterminal {
        tree: String,
        address: GornAddress,
    },
    MarkerOnNonNonterminal {
        tree: String,
        address: GornAddress,
    },
    MarkerOnInternal {
        tree: String,
        address: GornAddress,
    },
    AuxiliaryWithoutFoot {
        tree: String,
    },
    MultipleFeet {
        tree: String,
        address: GornAddress,
    },
    FootLabelMismatch {
        tree: String,
        address: GornAddress,
    },
    InitialWithFoot {
        tree: String,
        address: GornAddress,
    },
}

impl Diagnostic {
    pub fn code(&self) -> &'static str {
        match self {
            Diagnostic::StartNotNonterminal { .. } => "start-not-nonterminal",
            Diagnostic::AlphabetsOverlap { .. } => "alphabets-overlap",
            Diagnostic::DuplicateTreeName { .. } => "duplicate-tree-name",
            Diagnostic::SymbolOutsideAlphabet { .. } => "symbol-outside-alphabet",
            Diagnostic::InternalNotNonterminal { .. } => "internal-not-nonterminal",
            Diagnostic::MarkerOnNonNonterminal { .. } => "marker-on-non-nonterminal",
            Diagnostic::MarkerOnInternal { .. } => "marker-on-internal",
            Diagnostic::AuxiliaryWithoutFoot { .. } => "auxiliary-without-foot",
            Diagnostic::MultipleFeet { .. } => "multiple-feet",
            Diagnostic::FootLabelMismatch { .. } => "foot-label-mismatch",
            Diagnostic::InitialWithFoot { .. } => "initial-with-foot",
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())?;
        match self {
            Diagnostic::StartNotNonterminal { start } => write!(f, ": `{}`", start),
            Diagnostic::AlphabetsOverlap { symbol } => write!(f, ": `{}`", symbol),
            Diagnostic::DuplicateTreeName { tree } | Diagnostic::AuxiliaryWithoutFoot { tree } => {
                write!(f, ": {}", tree)
            }
            Diagnostic::SymbolOutsideAlphabet {
                tree,
                address,
                symbol,
            } => write!(f, ": {} at {} (`{}`)", tree, address, symbol),
            Diagnostic::InternalNotNonterminal { tree, address }
            | Diagnostic::MarkerOnNonNonterminal { tree, address }
            | Diagnostic::MarkerOnInternal { tree, address }
            | Diagnostic::MultipleFeet { tree, address }
            | Diagnostic::FootLabelMismatch { tree, address }
            | Diagnostic::InitialWithFoot { tree, address } => {
                write!(f, ": {} at {}", tree, address)
            }
        }
    }
}
