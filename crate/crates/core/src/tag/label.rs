use std::fmt;

/// The symbol carried by a tree node.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Nonterminal(String),
    Terminal(String),
    Epsilon,
}

impl Symbol {
    pub fn nonterminal(name: impl Into<String>) -> Self {
        Symbol::Nonterminal(name.into())
    }

    pub fn terminal(name: impl Into<String>) -> Self {
        Symbol::Terminal(name.into())
    }

    pub fn is_nonterminal(&self) -> bool {
        matches!(self, Symbol::Nonterminal(_))
    }

    /// The text of the symbol; `ε` for the empty word.
    pub fn name(&self) -> &str {
        match self {
            Symbol::Nonterminal(s) | Symbol::Terminal(s) => s,
            Symbol::Epsilon => "ε",
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Operation marker on a leaf: `↓` (substitution site) or `★` (foot).
///
/// Being an enum, a node can never be both substitution- and foot-marked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Marker {
    #[default]
    None,
    Substitution,
    Foot,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeLabel {
    pub symbol: Symbol,
    pub marker: Marker,
}

impl NodeLabel {
    pub fn plain(symbol: Symbol) -> Self {
        NodeLabel {
            symbol,
            marker: Marker::None,
        }
    }

    pub fn substitution(name: impl Into<String>) -> Self {
        NodeLabel {
            symbol: Symbol::Nonterminal(name.into()),
            marker: Marker::Substitution,
        }
    }

    pub fn foot(name: impl Into<String>) -> Self {
        NodeLabel {
            symbol: Symbol::Nonterminal(name.into()),
            marker: Marker::Foot,
        }
    }

    pub fn is_foot(&self) -> bool {
        self.marker == Marker::Foot
    }

    pub fn is_substitution_site(&self) -> bool {
        self.marker == Marker::Substitution
    }
}
