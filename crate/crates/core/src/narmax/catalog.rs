//! The NARMAX grammar, its restriction presets and the NBJ extension.

use std::fmt;
use std::str::FromStr;

use crate::model::SignalKind;
use crate::tag::{ElementaryTree, Grammar, SyntacticTree};

/// Terminal tokens of the NARMAX grammar.
pub mod token {
    pub const U: &str = "u";
    pub const Y: &str = "y";
    pub const XI: &str = "ξ";
    pub const PLUS: &str = "+";
    pub const COEFF: &str = "c";
    pub const TIMES: &str = "×";
    pub const DELAY: &str = "q⁻¹";
    pub const Y_HAT: &str = "ŷ";
    pub const V: &str = "v";
    pub const COMMA: &str = ",";
    pub const ZERO: &str = "0";
}

/// What an auxiliary tree contributes to the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TreeRole {
    /// Starts a new term `c × s` (adjoins at an `expr0` node).
    Additive(SignalKind),
    /// Multiplies a term by `s` (adjoins at an `expr1` node).
    Multiplicative(SignalKind),
    /// Adds one `q⁻¹` to a factor (adjoins at an `expr2` node).
    Delay,
}

/// Tree names and node addresses for one polynomial "side" of a grammar.
///
/// The NARMAX grammar has one side; the NBJ grammar has a process side and
/// a noise side with their own nonterminals.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Side {
    pub initial: &'static str,
    /// Where the additive chain hangs in the initial tree.
    pub attach: &'static str,
    pub additive: [Option<&'static str>; 3],
    pub multiplicative: [Option<&'static str>; 3],
    pub delay: &'static str,
    /// Yield token for each signal (`None` if the side lacks it).
    pub signal_tokens: [Option<&'static str>; 3],
    /// Last token of a well-formed expression on this side.
    pub base: &'static str,
    /// Tokens that belong to another side.
    pub foreign: &'static [&'static str],
}

/// Index into the per-signal arrays of [`Side`].
pub(crate) fn slot(s: SignalKind) -> usize {
    match s {
        SignalKind::Output => 0,
        SignalKind::Input => 1,
        SignalKind::Noise => 2,
    }
}

/// Address of the factor's `expr2` node inside an additive tree.
pub(crate) const ADDITIVE_FACTOR: &str = "1.3";
/// Address of the `expr1` node inside an additive tree.
pub(crate) const ADDITIVE_PRODUCT: &str = "1";
/// Address of the factor's `expr2` node inside a multiplicative tree.
pub(crate) const MULTIPLICATIVE_FACTOR: &str = "3";

pub(crate) const GN_SIDE: Side = Side {
    initial: "alpha1",
    attach: "ε",
    additive: [Some("beta2"), Some("beta1"), Some("beta3")],
    multiplicative: [Some("beta5"), Some("beta4"), Some("beta6")],
    delay: "beta7",
    signal_tokens: [Some(token::Y), Some(token::U), Some(token::XI)],
    base: token::XI,
    foreign: &[],
};

pub(crate) const NBJ_PROCESS_SIDE: Side = Side {
    initial: "alpha1",
    attach: "1",
    additive: [Some("fbeta2"), Some("fbeta1"), None],
    multiplicative: [Some("fbeta5"), Some("fbeta4"), None],
    delay: "fbeta7",
    signal_tokens: [Some(token::Y_HAT), Some(token::U), None],
    base: token::ZERO,
    foreign: &[token::XI, token::V],
};

pub(crate) const NBJ_NOISE_SIDE: Side = Side {
    initial: "alpha1",
    attach: "3",
    additive: [Some("gbeta2"), Some("gbeta1"), Some("gbeta3")],
    multiplicative: [Some("gbeta5"), Some("gbeta4"), Some("gbeta6")],
    delay: "gbeta7",
    signal_tokens: [Some(token::V), Some(token::U), Some(token::XI)],
    base: token::XI,
    foreign: &[token::Y_HAT],
};

fn tree(src: &str) -> SyntacticTree {
    src.parse().expect("built-in tree")
}

/// Additive, multiplicative and delay trees over the nonterminals
/// `{e0, e1, e2}` for the signals that have a token.
fn side_trees(side: &Side, e0: &str, e1: &str, e2: &str) -> Vec<(ElementaryTree, TreeRole)> {
    let factor = |s: SignalKind| {
        let tok = side.signal_tokens[slot(s)].unwrap();
        // outputs carry one built-in delay so they are causal by construction
        if s == SignalKind::Output {
            format!("{e2}({tok} {})", token::DELAY)
        } else {
            format!("{e2}({tok})")
        }
    };
    let signals = [SignalKind::Input, SignalKind::Output, SignalKind::Noise];
    let mut out = Vec::new();
    for s in signals {
        if let Some(name) = side.additive[slot(s)] {
            let src = format!("{e0}({e1}(par(c) op(×) {}) op(+) {e0}★)", factor(s));
            out.push((
                ElementaryTree::auxiliary(name, tree(&src)),
                TreeRole::Additive(s),
            ));
        }
    }
    for s in signals {
        if let Some(name) = side.multiplicative[slot(s)] {
            let src = format!("{e1}({e1}★ op(×) {})", factor(s));
            out.push((
                ElementaryTree::auxiliary(name, tree(&src)),
                TreeRole::Multiplicative(s),
            ));
        }
    }
    let src = format!("{e2}({e2}★ {})", token::DELAY);
    out.push((
        ElementaryTree::auxiliary(side.delay, tree(&src)),
        TreeRole::Delay,
    ));
    out
}

/// The NARMAX grammar together with the role of each auxiliary tree.
#[derive(Clone, Debug)]
pub struct GnCatalog {
    grammar: Grammar,
    roles: Vec<(String, TreeRole)>,
}

impl GnCatalog {
    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn into_grammar(self) -> Grammar {
        self.grammar
    }

    pub fn role(&self, tree: &str) -> Option<TreeRole> {
        self.roles.iter().find(|(n, _)| n == tree).map(|&(_, r)| r)
    }
}

/// Builds the NARMAX grammar: `N = {expr0, expr1, expr2, op, par}`,
/// `T = {u, y, ξ, +, c, ×, q⁻¹}`, start `expr0`, initial tree
/// `alpha1 = expr0(ξ)` and auxiliary trees `beta1..beta7`:
///
/// | tree  | role                 | shape                                          |
/// |-------|----------------------|------------------------------------------------|
/// | beta1 | additive `u`         | `expr0(expr1(par(c) op(×) expr2(u)) op(+) expr0★)` |
/// | beta2 | additive `y`         | same with `expr2(y q⁻¹)`                       |
/// | beta3 | additive `ξ`         | same with `expr2(ξ)`                           |
/// | beta4 | multiplicative `u`   | `expr1(expr1★ op(×) expr2(u))`                 |
/// | beta5 | multiplicative `y`   | same with `expr2(y q⁻¹)`                       |
/// | beta6 | multiplicative `ξ`   | same with `expr2(ξ)`                           |
/// | beta7 | delay                | `expr2(expr2★ q⁻¹)`                            |
pub fn build_gn() -> GnCatalog {
    use token::*;
    let mut grammar = Grammar::new(
        ["expr0", "expr1", "expr2", "op", "par"],
        [U, Y, XI, PLUS, COEFF, TIMES, DELAY],
        "expr0",
    )
    .with(ElementaryTree::initial("alpha1", tree("expr0(ξ)")));
    let mut trees = side_trees(&GN_SIDE, "expr0", "expr1", "expr2");
    trees.sort_by(|a, b| a.0.name().cmp(b.0.name()));
    let mut roles = Vec::new();
    for (et, role) in trees {
        roles.push((et.name().to_owned(), role));
        grammar.add(et);
    }
    GnCatalog { grammar, roles }
}

/// Sub-grammars of the NARMAX grammar obtained by restricting its
/// auxiliary trees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GrammarPreset {
    Narmax,
    Arx,
    Narx,
    Fir,
    Volterra,
}

impl GrammarPreset {
    pub const ALL: [GrammarPreset; 5] = [
        GrammarPreset::Narmax,
        GrammarPreset::Arx,
        GrammarPreset::Narx,
        GrammarPreset::Fir,
        GrammarPreset::Volterra,
    ];

    pub fn auxiliaries(self) -> &'static [&'static str] {
        match self {
            GrammarPreset::Narmax => &[
                "beta1", "beta2", "beta3", "beta4", "beta5", "beta6", "beta7",
            ],
            GrammarPreset::Arx => &["beta1", "beta2", "beta7"],
            GrammarPreset::Narx => &["beta1", "beta2", "beta4", "beta5", "beta7"],
            GrammarPreset::Fir => &["beta1", "beta7"],
            GrammarPreset::Volterra => &["beta1", "beta4", "beta7"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GrammarPreset::Narmax => "narmax",
            GrammarPreset::Arx => "arx",
            GrammarPreset::Narx => "narx",
            GrammarPreset::Fir => "fir",
            GrammarPreset::Volterra => "volterra",
        }
    }
}

impl fmt::Display for GrammarPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GrammarPreset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GrammarPreset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!(
                    "unknown preset `{}` (expected narmax, arx, narx, fir or volterra)",
                    s
                )
            })
    }
}

/// The NARMAX grammar cut down to the preset's auxiliary trees.
pub fn restrict(preset: GrammarPreset) -> Grammar {
    build_gn()
        .grammar()
        .restrict_auxiliaries(preset.auxiliaries())
}

/// The NBJ grammar and its tree roles.
#[derive(Clone, Debug)]
pub struct NbjCatalog {
    grammar: Grammar,
    roles: Vec<(String, TreeRole, NbjPart)>,
}

/// Which NBJ equation a tree belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NbjPart {
    Process,
    Noise,
}

impl NbjCatalog {
    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn role(&self, tree: &str) -> Option<(TreeRole, NbjPart)> {
        self.roles
            .iter()
            .find(|(n, ..)| n == tree)
            .map(|&(_, r, p)| (r, p))
    }
}

/// Builds the NBJ grammar. The initial tree
/// `expr_bj(expr0f(0) , expr0g(ξ))` yields `0 , ξ`; the process side
/// (`fbeta*`, over `u` and `ŷ`) grows left of the comma and the noise side
/// (`gbeta*`, over `u`, `v` and `ξ`) right of it. Tree numbering follows the
/// NARMAX grammar, so the process side has no `fbeta3`/`fbeta6`.
pub fn build_gnbj() -> NbjCatalog {
    use token::*;
    let mut grammar = Grammar::new(
        [
            "expr_bj", "expr0f", "expr1f", "expr2f", "expr0g", "expr1g", "expr2g", "op", "par",
        ],
        [U, Y_HAT, V, XI, PLUS, COEFF, TIMES, DELAY, COMMA, ZERO],
        "expr_bj",
    )
    .with(ElementaryTree::initial(
        "alpha1",
        tree("expr_bj(expr0f(0) , expr0g(ξ))"),
    ));
    let mut roles = Vec::new();
    for (side, part, (e0, e1, e2)) in [
        (
            &NBJ_PROCESS_SIDE,
            NbjPart::Process,
            ("expr0f", "expr1f", "expr2f"),
        ),
        (
            &NBJ_NOISE_SIDE,
            NbjPart::Noise,
            ("expr0g", "expr1g", "expr2g"),
        ),
    ] {
        let mut trees = side_trees(side, e0, e1, e2);
        trees.sort_by(|a, b| a.0.name().cmp(b.0.name()));
        for (et, role) in trees {
            roles.push((et.name().to_owned(), role, part));
            grammar.add(et);
        }
    }
    NbjCatalog { grammar, roles }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tag::TreeKind;

    #[test]
    fn gn_validates() {
        let gn = build_gn();
        assert_eq!(gn.grammar().validate(), vec![]);
        assert_eq!(gn.grammar().initials().len(), 1);
        assert_eq!(gn.grammar().auxiliaries().len(), 7);
    }

    #[test]
    fn gn_alphabets() {
        let gn = build_gn();
        let g = gn.grammar();
        let n: Vec<_> = g.nonterminals().iter().map(String::as_str).collect();
        assert_eq!(n, ["expr0", "expr1", "expr2", "op", "par"]);
        let t: Vec<_> = g.terminals().iter().map(String::as_str).collect();
        assert_eq!(t, ["u", "y", "ξ", "+", "c", "×", "q⁻¹"]);
        assert_eq!(g.start(), "expr0");
    }

    #[test]
    fn alpha1_yields_noise() {
        let gn = build_gn();
        let alpha = gn.grammar().lookup("alpha1").unwrap();
        assert_eq!(alpha.kind(), TreeKind::Initial);
        assert_eq!(alpha.tree().yield_tokens(), vec!["ξ"]);
    }

    #[test]
    fn tree_shapes_and_roles() {
        let gn = build_gn();
        let g = gn.grammar();
        let shape = |n: &str| g.lookup(n).unwrap().tree().to_string();
        assert_eq!(
            shape("beta1"),
            "expr0(expr1(par(c) op(×) expr2(u)) op(+) expr0★)"
        );
        assert_eq!(
            shape("beta2"),
            "expr0(expr1(par(c) op(×) expr2(y q⁻¹)) op(+) expr0★)"
        );
        assert_eq!(
            shape("beta3"),
            "expr0(expr1(par(c) op(×) expr2(ξ)) op(+) expr0★)"
        );
        assert_eq!(shape("beta4"), "expr1(expr1★ op(×) expr2(u))");
        assert_eq!(shape("beta5"), "expr1(expr1★ op(×) expr2(y q⁻¹))");
        assert_eq!(shape("beta6"), "expr1(expr1★ op(×) expr2(ξ))");
        assert_eq!(shape("beta7"), "expr2(expr2★ q⁻¹)");
        assert_eq!(
            gn.role("beta2"),
            Some(TreeRole::Additive(SignalKind::Output))
        );
        assert_eq!(
            gn.role("beta6"),
            Some(TreeRole::Multiplicative(SignalKind::Noise))
        );
        assert_eq!(gn.role("beta7"), Some(TreeRole::Delay));
        assert_eq!(gn.role("alpha1"), None);
    }

    #[test]
    fn root_and_foot_follow_role() {
        let gn = build_gn();
        for et in gn.grammar().auxiliaries() {
            let expected = match gn.role(et.name()).unwrap() {
                TreeRole::Additive(_) => "expr0",
                TreeRole::Multiplicative(_) => "expr1",
                TreeRole::Delay => "expr2",
            };
            let t = et.tree();
            assert_eq!(t.root_label().symbol.name(), expected, "{}", et.name());
            assert_eq!(
                t.label(t.foot().unwrap()).symbol.name(),
                expected,
                "{}",
                et.name()
            );
        }
    }

    #[test]
    fn output_trees_carry_one_delay() {
        let gn = build_gn();
        for name in ["beta2", "beta5"] {
            let y = gn.grammar().lookup(name).unwrap().tree().yield_tokens();
            let at = y.iter().position(|t| t == "y").unwrap();
            assert_eq!(y[at + 1], "q⁻¹");
            assert_eq!(y.iter().filter(|t| *t == "q⁻¹").count(), 1);
        }
    }

    #[test]
    fn additive_trees_have_one_coefficient() {
        let gn = build_gn();
        for name in ["beta1", "beta2", "beta3"] {
            let t = gn.grammar().lookup(name).unwrap().tree();
            let pars = t
                .node_ids()
                .filter(|&id| t.label(id).symbol.name() == "par")
                .collect::<Vec<_>>();
            assert_eq!(pars.len(), 1);
            assert_eq!(t.children(pars[0]).len(), 1);
            assert_eq!(t.label(t.children(pars[0])[0]).symbol.name(), "c");
        }
    }

    #[test]
    fn presets() {
        let names = |p| {
            restrict(p)
                .auxiliaries()
                .iter()
                .map(|t| t.name().to_owned())
                .collect::<Vec<_>>()
        };
        assert_eq!(names(GrammarPreset::Arx), ["beta1", "beta2", "beta7"]);
        assert_eq!(
            names(GrammarPreset::Narx),
            ["beta1", "beta2", "beta4", "beta5", "beta7"]
        );
        assert_eq!(names(GrammarPreset::Fir), ["beta1", "beta7"]);
        assert_eq!(names(GrammarPreset::Volterra), ["beta1", "beta4", "beta7"]);
        for p in GrammarPreset::ALL {
            let g = restrict(p);
            assert_eq!(g.validate(), vec![]);
            assert_eq!(g.initials().len(), 1);
            assert_eq!(p.name().parse::<GrammarPreset>().unwrap(), p);
        }
        assert!("arma".parse::<GrammarPreset>().is_err());
    }

    #[test]
    fn nbj_validates() {
        let nbj = build_gnbj();
        assert_eq!(nbj.grammar().validate(), vec![]);
        assert_eq!(nbj.grammar().auxiliaries().len(), 12);
        let alpha = nbj.grammar().lookup("alpha1").unwrap();
        assert_eq!(alpha.tree().yield_tokens(), vec!["0", ",", "ξ"]);
        assert_eq!(
            nbj.role("fbeta2"),
            Some((TreeRole::Additive(SignalKind::Output), NbjPart::Process))
        );
        assert_eq!(
            nbj.role("gbeta6"),
            Some((TreeRole::Multiplicative(SignalKind::Noise), NbjPart::Noise))
        );
        assert!(nbj.grammar().lookup("fbeta3").is_none());
    }
}
