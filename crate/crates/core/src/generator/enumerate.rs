use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use crate::model::NarmaxModel;
use crate::narmax::derived_to_model;
use crate::tag::{Derivation, GornAddress, Grammar, Operation};

use super::bounds::GenBounds;

#[derive(Clone, Debug)]
pub(crate) struct Site {
    pub address: GornAddress,
    pub op: Operation,
    /// Trees that can be attached here, by name.
    pub candidates: Vec<String>,
}

/// Operation sites of every elementary tree, in address order.
///
/// Adjunction sites are internal nonterminal nodes that some auxiliary tree
/// can adjoin into; substitution sites are `↓` leaves.
#[derive(Clone, Debug)]
pub(crate) struct SiteTable {
    sites: HashMap<String, Rc<[Site]>>,
}

impl SiteTable {
    pub fn new(g: &Grammar) -> Self {
        let mut sites = HashMap::new();
        for et in g.elementary_trees() {
            let tree = et.tree();
            let mut list = Vec::new();
            for id in tree.preorder() {
                let label = tree.label(id);
                if !label.symbol.is_nonterminal() || label.is_foot() {
                    continue;
                }
                let (op, pool) = if label.is_substitution_site() {
                    (Operation::Substitution, g.initials())
                } else if !tree.is_leaf(id) {
                    (Operation::Adjunction, g.auxiliaries())
                } else {
                    continue;
                };
                let mut candidates: Vec<String> = pool
                    .iter()
                    .filter(|c| *c.root_symbol() == label.symbol)
                    .map(|c| c.name().to_owned())
                    .collect();
                candidates.sort();
                if op == Operation::Adjunction && candidates.is_empty() {
                    continue;
                }
                list.push(Site {
                    address: tree.address_of(id),
                    op,
                    candidates,
                });
            }
            list.sort_by(|a, b| a.address.cmp(&b.address));
            sites.insert(et.name().to_owned(), list.into());
        }
        SiteTable { sites }
    }

    pub fn of(&self, tree: &str) -> Rc<[Site]> {
        self.sites
            .get(tree)
            .cloned()
            .unwrap_or_else(|| Rc::from([]))
    }
}

/// Memoized enumeration of derivations by exact operation count.
struct Enumerator {
    sites: SiteTable,
    memo: HashMap<(String, usize), Rc<Vec<Derivation>>>,
}

impl Enumerator {
    /// All saturated derivations rooted at `tree` with exactly `k` operations.
    fn exact(&mut self, tree: &str, k: usize) -> Rc<Vec<Derivation>> {
        if let Some(hit) = self.memo.get(&(tree.to_owned(), k)) {
            return hit.clone();
        }
        let sites = self.sites.of(tree);
        let mut out = Vec::new();
        let mut edges = Vec::new();
        self.fill(tree, &sites, 0, k, &mut edges, &mut out);
        let out = Rc::new(out);
        self.memo.insert((tree.to_owned(), k), out.clone());
        out
    }

    fn fill(
        &mut self,
        tree: &str,
        sites: &[Site],
        i: usize,
        budget: usize,
        edges: &mut Vec<(usize, Derivation)>,
        out: &mut Vec<Derivation>,
    ) {
        let Some(site) = sites.get(i) else {
            if budget == 0 {
                let mut d = Derivation::new(tree);
                for (s, child) in edges.iter() {
                    let s = &sites[*s];
                    d.attach(s.op, s.address.clone(), child.clone())
                        .expect("sites have distinct addresses");
                }
                out.push(d);
            }
            return;
        };
        if site.op == Operation::Adjunction {
            self.fill(tree, sites, i + 1, budget, edges, out);
        }
        for name in &site.candidates {
            for used in 1..=budget {
                let children = self.exact(name, used - 1);
                for child in children.iter() {
                    edges.push((i, child.clone()));
                    self.fill(tree, sites, i + 1, budget - used, edges, out);
                    edges.pop();
                }
            }
        }
    }
}

/// Every saturated derivation of `g` with at most `bounds.max_adjunctions`
/// operations, each exactly once.
///
/// Derivations come in order of operation count, then by site address and
/// tree name at each node. Only the operation bound is applied here; see
/// [`enumerate_models`] for the model-level bounds.
pub fn enumerate_derivations(g: &Grammar, bounds: &GenBounds) -> impl Iterator<Item = Derivation> {
    let mut starts: Vec<String> = g
        .initials()
        .iter()
        .filter(|t| t.root_symbol().name() == g.start())
        .map(|t| t.name().to_owned())
        .collect();
    starts.sort();
    let mut en = Enumerator {
        sites: SiteTable::new(g),
        memo: HashMap::new(),
    };
    (0..=bounds.max_adjunctions).flat_map(move |k| {
        starts
            .iter()
            .flat_map(|s| en.exact(s, k).as_ref().clone())
            .collect::<Vec<_>>()
    })
}

/// Canonical models of the enumerated derivations of a NARMAX grammar (or
/// preset) that satisfy `bounds`, in enumeration order. With `unique`, each
/// model is reported only the first time it is reached.
pub fn enumerate_models(g: &Grammar, bounds: &GenBounds, unique: bool) -> Vec<NarmaxModel> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for d in enumerate_derivations(g, bounds) {
        let tree = d.derive(g).expect("enumerated derivations are well-formed");
        let model = derived_to_model(&tree).expect("grammar must be a NARMAX grammar");
        if !bounds.admits(&model) {
            continue;
        }
        if unique && !seen.insert(model.to_string()) {
            continue;
        }
        out.push(model);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelClass;
    use crate::narmax::{build_gn, restrict, GrammarPreset};

    fn count(g: &Grammar, max: usize) -> usize {
        enumerate_derivations(g, &GenBounds::adjunctions(max)).count()
    }

    #[test]
    fn gn_small_counts() {
        let gn = build_gn().into_grammar();
        let zero: Vec<_> = enumerate_derivations(&gn, &GenBounds::adjunctions(0)).collect();
        assert_eq!(zero, vec![Derivation::new("alpha1")]);
        // alpha1 has a single adjunction site (its root) and three additive trees fit it
        let one: Vec<String> = enumerate_derivations(&gn, &GenBounds::adjunctions(1))
            .map(|d| d.to_string())
            .collect();
        assert_eq!(
            one,
            [
                "alpha1",
                "alpha1[adj@ε -> beta1]",
                "alpha1[adj@ε -> beta2]",
                "alpha1[adj@ε -> beta3]"
            ]
        );
    }

    #[test]
    fn sites_of_gn_trees() {
        let gn = build_gn().into_grammar();
        let table = SiteTable::new(&gn);
        let addrs = |n: &str| {
            table
                .of(n)
                .iter()
                .map(|s| s.address.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(addrs("alpha1"), ["ε"]);
        assert_eq!(addrs("beta1"), ["ε", "1", "1.3"]);
        assert_eq!(addrs("beta4"), ["ε", "3"]);
        assert_eq!(addrs("beta7"), ["ε"]);
        assert_eq!(table.of("beta4")[1].candidates, ["beta7"]);
    }

    #[test]
    fn substitution_sites_must_be_filled() {
        let g: Grammar = "nonterminals: S A\nterminals: a b\nstart: S\n\
                          initial alpha1 = S(A↓ b)\ninitial alpha2 = A(a)\n\
                          auxiliary beta1 = A(a A★)"
            .parse()
            .unwrap();
        let all: Vec<String> = enumerate_derivations(&g, &GenBounds::adjunctions(2))
            .map(|d| d.to_string())
            .collect();
        assert_eq!(
            all,
            [
                "alpha1[sub@1 -> alpha2]",
                "alpha1[sub@1 -> alpha2[adj@ε -> beta1]]"
            ]
        );
    }

    #[test]
    fn deterministic_and_duplicate_free() {
        let gn = build_gn().into_grammar();
        let a: Vec<_> = enumerate_derivations(&gn, &GenBounds::adjunctions(4)).collect();
        let b: Vec<_> = enumerate_derivations(&gn, &GenBounds::adjunctions(4)).collect();
        assert_eq!(a, b);
        let set: HashSet<_> = a.iter().collect();
        assert_eq!(set.len(), a.len());
        assert!(a.iter().all(|d| d.operation_count() <= 4));
    }

    #[test]
    fn arx_preset_enumerates_arx_models() {
        let g = restrict(GrammarPreset::Arx);
        let models = enumerate_models(&g, &GenBounds::adjunctions(3), false);
        assert_eq!(models.len(), count(&g, 3));
        assert!(models
            .iter()
            .all(|m| m.classify().contains(&ModelClass::Arx)));
    }

    #[test]
    fn unique_models_and_bounds() {
        let gn = build_gn().into_grammar();
        let bounds = GenBounds {
            max_terms: 1,
            ..GenBounds::adjunctions(3)
        };
        let models = enumerate_models(&gn, &bounds, true);
        assert!(models.iter().all(|m| m.len() <= 1));
        let names: HashSet<_> = models.iter().map(|m| m.to_string()).collect();
        assert_eq!(names.len(), models.len());
        assert!(names.contains("c1*u[-2] + xi"));
    }
}
