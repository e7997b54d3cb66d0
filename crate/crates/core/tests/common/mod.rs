//! Random TAG trees and an independent set-based model of the two
//! operations, shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use narmax_tag::tag::{Marker, NodeId, NodeLabel, Symbol, SyntacticTree};
use rand::seq::IndexedRandom;
use rand::Rng;

pub const NONTERMINALS: [&str; 3] = ["S", "A", "B"];
pub const TERMINALS: [&str; 3] = ["a", "b", "c"];

fn random_leaf<R: Rng>(rng: &mut R) -> SyntacticTree {
    match rng.random_range(0..10) {
        0..=5 => SyntacticTree::terminal(*TERMINALS.choose(rng).unwrap()),
        6..=8 => SyntacticTree::leaf(NodeLabel::substitution(*NONTERMINALS.choose(rng).unwrap())),
        _ => SyntacticTree::leaf(NodeLabel {
            symbol: Symbol::Epsilon,
            marker: Marker::None,
        }),
    }
}

/// A random tree rooted in `root`; with `foot`, exactly one leaf is a foot
/// labelled `foot`.
pub fn random_tree<R: Rng>(
    rng: &mut R,
    root: &str,
    depth: u32,
    foot: Option<&str>,
) -> SyntacticTree {
    let n = rng.random_range(1..=3);
    let foot_at = foot.map(|_| rng.random_range(0..n));
    let children = (0..n)
        .map(|i| {
            let carries_foot = foot_at == Some(i);
            if depth == 0 || rng.random_bool(0.4) {
                if carries_foot {
                    SyntacticTree::leaf(NodeLabel::foot(foot.unwrap()))
                } else {
                    random_leaf(rng)
                }
            } else {
                let label = *NONTERMINALS.choose(rng).unwrap();
                random_tree(
                    rng,
                    label,
                    depth - 1,
                    if carries_foot { foot } else { None },
                )
            }
        })
        .collect();
    SyntacticTree::branch(root, children)
}

pub fn random_initial<R: Rng>(rng: &mut R, root: &str) -> SyntacticTree {
    let depth = rng.random_range(0..=3);
    random_tree(rng, root, depth, None)
}

pub fn random_auxiliary<R: Rng>(rng: &mut R, root: &str) -> SyntacticTree {
    let depth = rng.random_range(0..=3);
    random_tree(rng, root, depth, Some(root))
}

/// A random host that has at least one substitution site, the chosen site
/// and an initial tree that fits it.
pub fn substitution_case<R: Rng>(rng: &mut R) -> (SyntacticTree, NodeId, SyntacticTree) {
    loop {
        let host = random_initial(rng, "S");
        let sites = host.substitution_sites();
        if let Some(&v) = sites.choose(rng) {
            let label = host.label(v).symbol.name().to_owned();
            let initial = random_initial(rng, &label);
            return (host, v, initial);
        }
    }
}

/// A random host, one of its internal nodes and an auxiliary tree that fits.
pub fn adjunction_case<R: Rng>(rng: &mut R) -> (SyntacticTree, NodeId, SyntacticTree) {
    let host = random_initial(rng, "S");
    let internal: Vec<NodeId> = host.node_ids().filter(|&id| !host.is_leaf(id)).collect();
    let v = *internal.choose(rng).unwrap();
    let label = host.label(v).symbol.name().to_owned();
    let aux = random_auxiliary(rng, &label);
    (host, v, aux)
}

/// A tree as plain vertex, edge and root sets.
#[derive(Debug, PartialEq, Eq)]
pub struct SetTree {
    pub vertices: BTreeMap<usize, NodeLabel>,
    pub edges: BTreeSet<(usize, usize)>,
    pub root: usize,
}

impl SetTree {
    pub fn of(t: &SyntacticTree) -> Self {
        SetTree {
            vertices: t.node_ids().map(|id| (id.0, t.label(id).clone())).collect(),
            edges: t.edges().map(|(a, b)| (a.0, b.0)).collect(),
            root: t.root().0,
        }
    }

    /// The inserted tree's vertices get ids shifted by `offset`.
    fn shifted(t: &SyntacticTree, offset: usize) -> Self {
        let s = SetTree::of(t);
        SetTree {
            vertices: s
                .vertices
                .into_iter()
                .map(|(k, l)| (k + offset, l))
                .collect(),
            edges: s
                .edges
                .into_iter()
                .map(|(a, b)| (a + offset, b + offset))
                .collect(),
            root: s.root + offset,
        }
    }
}

/// `V'' = V ∪ V' \ {v}`,
/// `E'' = (E \ {(x, v)}) ∪ E' ∪ {(x, r') | (x, v) ∈ E}`.
pub fn oracle_substitute(host: &SyntacticTree, v: NodeId, initial: &SyntacticTree) -> SetTree {
    let g = SetTree::of(host);
    let p = SetTree::shifted(initial, host.id_bound());
    let v = v.0;
    let mut vertices: BTreeMap<_, _> = g.vertices.into_iter().chain(p.vertices).collect();
    vertices.remove(&v);
    let mut edges: BTreeSet<_> = g.edges.iter().copied().filter(|&(_, b)| b != v).collect();
    edges.extend(p.edges);
    edges.extend(
        g.edges
            .iter()
            .filter(|&&(_, b)| b == v)
            .map(|&(a, _)| (a, p.root)),
    );
    SetTree {
        vertices,
        edges,
        root: g.root,
    }
}

/// `V'' = V ∪ V' \ {v}`,
/// `E'' = (E \ {(x, y) | x = v or y = v}) ∪ E' ∪ {(x, r') | (x, v) ∈ E}
///        ∪ {(f, y) | (v, y) ∈ E}`,
/// with the foot losing its marker and `r'` becoming the root when `v` was.
pub fn oracle_adjoin(host: &SyntacticTree, v: NodeId, aux: &SyntacticTree) -> SetTree {
    let g = SetTree::of(host);
    let offset = host.id_bound();
    let p = SetTree::shifted(aux, offset);
    let f = aux.foot().unwrap().0 + offset;
    let v = v.0;
    let mut vertices: BTreeMap<_, _> = g.vertices.into_iter().chain(p.vertices).collect();
    vertices.remove(&v);
    vertices.get_mut(&f).unwrap().marker = Marker::None;
    let mut edges: BTreeSet<_> = g
        .edges
        .iter()
        .copied()
        .filter(|&(a, b)| a != v && b != v)
        .collect();
    edges.extend(p.edges);
    edges.extend(
        g.edges
            .iter()
            .filter(|&&(_, b)| b == v)
            .map(|&(a, _)| (a, p.root)),
    );
    edges.extend(
        g.edges
            .iter()
            .filter(|&&(a, _)| a == v)
            .map(|&(_, b)| (f, b)),
    );
    SetTree {
        vertices,
        edges,
        root: if g.root == v { p.root } else { g.root },
    }
}

/// The `n`-th permutation of `0..len` in lexicographic order (`n < len!`).
pub fn nth_permutation(len: usize, mut n: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..len).collect();
    let mut out = Vec::with_capacity(len);
    for k in (1..=len).rev() {
        let f: usize = (1..k).product();
        out.push(pool.remove(n / f));
        n %= f;
    }
    out
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}
