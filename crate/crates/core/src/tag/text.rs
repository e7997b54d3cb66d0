//! Text formats for trees, grammars and derivations.
//!
//! Trees are written in parenthesized pre-order:
//!
//! ```text
//! expr0(expr1(par(c) op(×) expr2(u)) op(+) expr0★)
//! ```
//!
//! A node with children is a nonterminal. A leaf is a terminal unless it is
//! marked `↓` (substitution site) or `★` (foot), or written `name()` (an
//! unmarked nonterminal leaf). `ε` is the empty word. Terminals that would be
//! misread are double-quoted with `\` escapes.
//!
//! Grammar files:
//!
//! ```text
//! nonterminals: S A
//! terminals: a b
//! start: S
//! initial alpha1 = S(A↓ b)
//! auxiliary beta1 = A(a A★)
//! ```
//!
//! Derivations: `alpha1[adj@ε -> beta1[adj@1 -> beta4], sub@2 -> alpha2]`.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;

use super::address::GornAddress;
use super::derivation::{Derivation, Operation};
use super::error::TagError;
use super::grammar::{ElementaryTree, Grammar, TreeKind};
use super::label::{Marker, NodeLabel, Symbol};
use super::tree::{NodeId, SyntacticTree};

const SUBST: char = '↓';
const FOOT: char = '★';

fn syntax(pos: usize, msg: impl Into<String>) -> TagError {
    TagError::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn is_bare_safe(s: &str) -> bool {
    !s.is_empty()
        && s != "ε"
        && !s.ends_with(SUBST)
        && !s.ends_with(FOOT)
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '"' | '\\'))
}

fn write_atom(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    if is_bare_safe(s) {
        return f.write_str(s);
    }
    f.write_str("\"")?;
    for c in s.chars() {
        if matches!(c, '"' | '\\') {
            f.write_str("\\")?;
        }
        write!(f, "{}", c)?;
    }
    f.write_str("\"")
}

impl SyntacticTree {
    fn write_node(&self, f: &mut fmt::Formatter<'_>, id: NodeId) -> fmt::Result {
        let label = self.label(id);
        let children = self.children(id);
        match (&label.symbol, label.marker) {
            (Symbol::Epsilon, _) => f.write_str("ε")?,
            (Symbol::Terminal(s), _) => write_atom(f, s)?,
            (Symbol::Nonterminal(s), Marker::Substitution) => write!(f, "{}{}", s, SUBST)?,
            (Symbol::Nonterminal(s), Marker::Foot) => write!(f, "{}{}", s, FOOT)?,
            (Symbol::Nonterminal(s), Marker::None) => {
                f.write_str(s)?;
                if children.is_empty() {
                    f.write_str("()")?;
                }
            }
        }
        if !children.is_empty() {
            f.write_str("(")?;
            for (i, &c) in children.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                self.write_node(f, c)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for SyntacticTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_node(f, self.root())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Bare(String),
    Quoted(String),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek_char(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn next_tok(&mut self) -> Result<Option<(usize, Tok)>, TagError> {
        self.skip_ws();
        let start = self.pos;
        let mut chars = self.src[start..].chars();
        let Some(c) = chars.next() else {
            return Ok(None);
        };
        let tok = match c {
            '(' => {
                self.pos += 1;
                Tok::Open
            }
            ')' => {
                self.pos += 1;
                Tok::Close
            }
            '"' => {
                let mut out = String::new();
                let mut consumed = 1;
                let mut escaped = false;
                loop {
                    let Some(c) = chars.next() else {
                        return Err(syntax(start, "unterminated quoted label"));
                    };
                    consumed += c.len_utf8();
                    match (escaped, c) {
                        (false, '\\') => escaped = true,
                        (false, '"') => break,
                        _ => {
                            escaped = false;
                            out.push(c);
                        }
                    }
                }
                self.pos += consumed;
                Tok::Quoted(out)
            }
            _ => {
                let len = self.src[start..]
                    .find(|c: char| c.is_whitespace() || matches!(c, '(' | ')' | '"'))
                    .unwrap_or(self.src.len() - start);
                self.pos += len;
                Tok::Bare(self.src[start..start + len].to_owned())
            }
        };
        Ok(Some((start, tok)))
    }
}

/// A parsed node before it is placed in an arena.
struct RawNode {
    label: NodeLabel,
    children: Option<Vec<RawNode>>,
}

fn parse_raw(lx: &mut Lexer<'_>) -> Result<RawNode, TagError> {
    let (pos, tok) = lx
        .next_tok()?
        .ok_or_else(|| syntax(lx.src.len(), "expected a node"))?;
    let (symbol_text, quoted) = match tok {
        Tok::Bare(s) => (s, false),
        Tok::Quoted(s) => (s, true),
        Tok::Open | Tok::Close => return Err(syntax(pos, "expected a node label")),
    };
    let children = if lx.peek_char() == Some('(') {
        lx.next_tok()?;
        let mut kids = Vec::new();
        while lx.peek_char() != Some(')') {
            if lx.peek_char().is_none() {
                return Err(syntax(lx.src.len(), "unclosed `(`"));
            }
            kids.push(parse_raw(lx)?);
        }
        lx.next_tok()?;
        Some(kids)
    } else {
        None
    };

    let label = if quoted {
        if children.is_some() {
            return Err(syntax(pos, "a quoted terminal cannot have children"));
        }
        NodeLabel::plain(Symbol::Terminal(symbol_text))
    } else if let Some(name) = symbol_text.strip_suffix(SUBST) {
        NodeLabel::substitution(name)
    } else if let Some(name) = symbol_text.strip_suffix(FOOT) {
        NodeLabel::foot(name)
    } else if symbol_text == "ε" {
        NodeLabel::plain(Symbol::Epsilon)
    } else if children.is_some() {
        NodeLabel::plain(Symbol::Nonterminal(symbol_text))
    } else {
        NodeLabel::plain(Symbol::Terminal(symbol_text))
    };
    if label.marker != Marker::None {
        if label.symbol.name().is_empty() {
            return Err(syntax(pos, "marker without a label"));
        }
        if children.is_some() {
            return Err(syntax(pos, "only leaves can carry `↓` or `★`"));
        }
    }
    if label.symbol == Symbol::Epsilon && children.is_some() {
        return Err(syntax(pos, "`ε` cannot have children"));
    }
    Ok(RawNode { label, children })
}

fn place(tree: &mut SyntacticTree, parent: NodeId, raw: RawNode) {
    let id = tree.push_child(parent, raw.label);
    for c in raw.children.into_iter().flatten() {
        place(tree, id, c);
    }
}

fn parse_tree(src: &str) -> Result<SyntacticTree, TagError> {
    let mut lx = Lexer::new(src);
    let raw = parse_raw(&mut lx)?;
    if let Some((pos, _)) = lx.next_tok()? {
        return Err(syntax(pos, "trailing input after tree"));
    }
    let mut tree = SyntacticTree::leaf(raw.label);
    for c in raw.children.into_iter().flatten() {
        let root = tree.root();
        place(&mut tree, root, c);
    }
    Ok(tree)
}

impl FromStr for SyntacticTree {
    type Err = TagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tree(s)
    }
}

struct Atoms<'a>(&'a IndexSet<String>);

impl fmt::Display for Atoms<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write_atom(f, s)?;
        }
        Ok(())
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nonterminals: {}", Atoms(self.nonterminals()))?;
        writeln!(f, "terminals: {}", Atoms(self.terminals()))?;
        writeln!(f, "start: {}", self.start())?;
        for et in self.elementary_trees() {
            writeln!(f, "{} {} = {}", et.kind(), et.name(), et.tree())?;
        }
        Ok(())
    }
}

fn parse_atom_list(src: &str, offset: usize) -> Result<Vec<String>, TagError> {
    let mut lx = Lexer::new(src);
    let mut out = Vec::new();
    while let Some((pos, tok)) = lx.next_tok()? {
        match tok {
            Tok::Bare(s) | Tok::Quoted(s) => out.push(s),
            _ => {
                return Err(syntax(
                    offset + pos,
                    "unexpected parenthesis in symbol list",
                ))
            }
        }
    }
    Ok(out)
}

impl FromStr for Grammar {
    type Err = TagError;

    /// Parses the grammar file format. Lines starting with `#` are comments;
    /// a tree may continue over several lines.
    fn from_str(src: &str) -> Result<Self, Self::Err> {
        // (byte offset, statement text)
        let mut statements: Vec<(usize, String)> = Vec::new();
        let mut offset = 0;
        for line in src.split_inclusive('\n') {
            let trimmed = line.trim();
            let is_header = [
                "nonterminals:",
                "terminals:",
                "start:",
                "initial ",
                "auxiliary ",
            ]
            .iter()
            .any(|k| trimmed.starts_with(k));
            if trimmed.is_empty() || trimmed.starts_with('#') {
            } else if is_header {
                statements.push((offset, trimmed.to_owned()));
            } else if let Some((_, last)) = statements.last_mut() {
                last.push(' ');
                last.push_str(trimmed);
            } else {
                return Err(syntax(offset, "expected a header line"));
            }
            offset += line.len();
        }

        let mut nonterminals = None;
        let mut terminals = None;
        let mut start = None;
        let mut trees = Vec::new();
        for (pos, stmt) in statements {
            if let Some(rest) = stmt.strip_prefix("nonterminals:") {
                nonterminals = Some(parse_atom_list(rest, pos)?);
            } else if let Some(rest) = stmt.strip_prefix("terminals:") {
                terminals = Some(parse_atom_list(rest, pos)?);
            } else if let Some(rest) = stmt.strip_prefix("start:") {
                let mut names = parse_atom_list(rest, pos)?;
                if names.len() != 1 {
                    return Err(syntax(pos, "`start:` takes exactly one symbol"));
                }
                start = names.pop();
            } else {
                let (kind, rest) = match stmt.split_once(' ') {
                    Some(("initial", rest)) => (TreeKind::Initial, rest),
                    Some(("auxiliary", rest)) => (TreeKind::Auxiliary, rest),
                    _ => unreachable!(),
                };
                let (name, body) = rest
                    .split_once('=')
                    .ok_or_else(|| syntax(pos, "expected `<name> = <tree>`"))?;
                let name = name.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(syntax(pos, format!("bad tree name `{}`", name)));
                }
                let tree = parse_tree(body).map_err(|e| match e {
                    TagError::Syntax { pos: p, msg } => {
                        syntax(pos, format!("in `{}` at {}: {}", name, p, msg))
                    }
                    e => e,
                })?;
                trees.push(ElementaryTree::new(name, kind, tree));
            }
        }
        let missing = |what: &str| syntax(src.len(), format!("missing `{}` line", what));
        let mut g = Grammar::new(
            nonterminals.ok_or_else(|| missing("nonterminals:"))?,
            terminals.ok_or_else(|| missing("terminals:"))?,
            start.ok_or_else(|| missing("start:"))?,
        );
        for t in trees {
            g.add(t);
        }
        Ok(g)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tree_name())?;
        if self.edges().len() == 0 {
            return Ok(());
        }
        f.write_str("[")?;
        for (i, (addr, att)) in self.edges().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}@{} -> {}", att.op, addr, att.child)?;
        }
        f.write_str("]")
    }
}

struct DerivationParser<'a> {
    src: &'a str,
    pos: usize,
}

impl DerivationParser<'_> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), TagError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(syntax(self.pos, format!("expected `{}`", s)))
        }
    }

    fn word(&mut self, what: &str) -> Result<&str, TagError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| c.is_whitespace() || matches!(c, '[' | ']' | ',' | '@'))
            .unwrap_or(rest.len());
        let len = rest[..len].find("->").unwrap_or(len);
        if len == 0 {
            return Err(syntax(self.pos, format!("expected {}", what)));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn derivation(&mut self) -> Result<Derivation, TagError> {
        let mut d = Derivation::new(self.word("an elementary tree name")?);
        if !self.eat("[") {
            return Ok(d);
        }
        loop {
            let op_pos = self.pos;
            let op = match self.word("an operation")? {
                "sub" => Operation::Substitution,
                "adj" => Operation::Adjunction,
                other => return Err(syntax(op_pos, format!("unknown operation `{}`", other))),
            };
            self.expect("@")?;
            let addr_pos = self.pos;
            let address: GornAddress = self
                .word("an address")?
                .parse()
                .map_err(|e: TagError| syntax(addr_pos, e.to_string()))?;
            self.expect("->")?;
            let child = self.derivation()?;
            d.attach(op, address, child)
                .map_err(|e| syntax(addr_pos, e.to_string()))?;
            if self.eat("]") {
                return Ok(d);
            }
            self.expect(",")?;
        }
    }
}

impl FromStr for Derivation {
    type Err = TagError;

    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let mut p = DerivationParser { src, pos: 0 };
        let d = p.derivation()?;
        p.skip_ws();
        if p.pos != src.len() {
            return Err(syntax(p.pos, "trailing input after derivation"));
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_roundtrip_canonical() {
        let src = "expr0(expr1(par(c) op(×) expr2(u)) op(+) expr0★)";
        let t: SyntacticTree = src.parse().unwrap();
        assert_eq!(t.to_string(), src);
        assert_eq!(t.foot(), Some(t.node_at(&"3".parse().unwrap()).unwrap()));
    }

    #[test]
    fn whitespace_is_insignificant() {
        let t: SyntacticTree = "  S ( A↓\n  b\t)  ".parse().unwrap();
        assert_eq!(t.to_string(), "S(A↓ b)");
    }

    #[test]
    fn quoting_and_special_leaves() {
        let t = SyntacticTree::branch(
            "S",
            vec![
                SyntacticTree::terminal("x↓"),
                SyntacticTree::terminal("a b"),
                SyntacticTree::terminal("ε"),
                SyntacticTree::terminal("q\"\\"),
                SyntacticTree::leaf(NodeLabel::plain(Symbol::Epsilon)),
                SyntacticTree::leaf(NodeLabel::plain(Symbol::nonterminal("N"))),
            ],
        );
        let text = t.to_string();
        assert_eq!(text, r#"S("x↓" "a b" "ε" "q\"\\" ε N())"#);
        assert_eq!(text.parse::<SyntacticTree>().unwrap(), t);
    }

    #[test]
    fn tree_syntax_errors() {
        for bad in [
            "", "S(", "S(a))", "A↓(b)", "\"a\"(b)", "ε(a)", "(a)", "S(a) b", "↓",
        ] {
            assert!(bad.parse::<SyntacticTree>().is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn derivation_roundtrip() {
        let src = "alpha1[adj@ε -> beta1[adj@1 -> beta4, adj@1.3 -> beta7], sub@2 -> alpha2]";
        let d: Derivation = src.parse().unwrap();
        assert_eq!(d.to_string(), src);
        assert_eq!(d.operation_count(), 4);
        let spaced: Derivation =
            " alpha1 [ adj @ ε->beta1 [adj@1->beta4 ,adj@1.3->beta7 ] ,sub@2->alpha2 ] "
                .parse()
                .unwrap();
        assert_eq!(spaced, d);
    }

    #[test]
    fn derivation_edges_sorted_by_address() {
        let d: Derivation = "a[sub@2 -> c, adj@ε -> b]".parse().unwrap();
        assert_eq!(d.to_string(), "a[adj@ε -> b, sub@2 -> c]");
    }

    #[test]
    fn derivation_errors() {
        for bad in [
            "",
            "a[",
            "a[adj@1 -> b",
            "a[mov@1 -> b]",
            "a[adj@1 -> b, adj@1 -> c]",
            "a[adj@x -> b]",
            "a b",
        ] {
            assert!(bad.parse::<Derivation>().is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn grammar_file_roundtrip() {
        let src = "\
# toy grammar
nonterminals: S A
terminals: a b \"x y\"
start: S
initial alpha1 = S(A↓
   b)
auxiliary beta1 = A(a A★)
";
        let g: Grammar = src.parse().unwrap();
        assert_eq!(g.initials().len(), 1);
        assert_eq!(g.auxiliaries().len(), 1);
        assert!(g.terminals().contains("x y"));
        let canonical = g.to_string();
        assert_eq!(
            canonical,
            "nonterminals: S A\nterminals: a b \"x y\"\nstart: S\ninitial alpha1 = S(A↓ b)\nauxiliary beta1 = A(a A★)\n"
        );
        assert_eq!(canonical.parse::<Grammar>().unwrap(), g);
    }

    #[test]
    fn grammar_file_errors() {
        assert!("terminals: a\nstart: S\n".parse::<Grammar>().is_err());
        assert!("garbage\n".parse::<Grammar>().is_err());
        assert!("nonterminals: S\nterminals: a\nstart: S T\n"
            .parse::<Grammar>()
            .is_err());
        assert!("nonterminals: S\nterminals: a\nstart: S\ninitial = S(a)\n"
            .parse::<Grammar>()
            .is_err());
    }
}
