use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Factor, Monomial, NarmaxModel, SignalKind};
use crate::narmax::{build_gn, derived_to_model, model_from_yield};
use crate::tag::{Derivation, GornAddress, Grammar, Operation};

use super::bounds::GenBounds;
use super::enumerate::SiteTable;

/// Attempts at a strict-mode sample before falling back to `y_k = ξ_k`.
const STRICT_ATTEMPTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub bounds: GenBounds,
    pub seed: u64,
}

/// Seeded random derivations (and their models) of a NARMAX grammar or
/// preset.
///
/// Each draw picks an operation count uniformly from
/// `0..=max_adjunctions` and grows a derivation from the initial tree one
/// random adjunction at a time, skipping moves whose model would break the
/// bounds. A draw may stop short of its target when no move fits.
pub struct Sampler {
    grammar: Grammar,
    sites: SiteTable,
    bounds: GenBounds,
    rng: ChaCha8Rng,
}

struct Move {
    path: Vec<GornAddress>,
    address: GornAddress,
    tree: String,
}

impl Sampler {
    pub fn new(grammar: Grammar, cfg: &SampleConfig) -> Self {
        Sampler {
            sites: SiteTable::new(&grammar),
            grammar,
            bounds: cfg.bounds,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        }
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    fn moves(&self, d: &Derivation, path: &mut Vec<GornAddress>, out: &mut Vec<Move>) {
        for site in self.sites.of(d.tree_name()).iter() {
            if site.op != Operation::Adjunction || d.edge(&site.address).is_some() {
                continue;
            }
            for tree in &site.candidates {
                out.push(Move {
                    path: path.clone(),
                    address: site.address.clone(),
                    tree: tree.clone(),
                });
            }
        }
        for (address, attachment) in d.edges() {
            path.push(address.clone());
            self.moves(&attachment.child, path, out);
            path.pop();
        }
    }

    fn apply(d: &Derivation, mv: &Move) -> Derivation {
        let mut out = d.clone();
        let mut node = &mut out;
        for a in &mv.path {
            node = &mut node.edge_mut(a).expect("move path exists").child;
        }
        node.attach(
            Operation::Adjunction,
            mv.address.clone(),
            Derivation::new(&mv.tree),
        )
        .expect("move targets a free site");
        out
    }

    /// Raw model of a derivation (terms not merged), for bound checks.
    fn raw_model(&self, d: &Derivation) -> NarmaxModel {
        let tree = d
            .derive(&self.grammar)
            .expect("sampled derivations are well-formed");
        model_from_yield(&tree.yield_tokens()).expect("grammar must be a NARMAX grammar")
    }

    fn grow(&mut self) -> Derivation {
        let start = self.grammar.initials()[0].name().to_owned();
        let mut d = Derivation::new(start);
        let target = self.rng.random_range(0..=self.bounds.max_adjunctions);
        for _ in 0..target {
            let mut moves = Vec::new();
            self.moves(&d, &mut Vec::new(), &mut moves);
            let mut next = None;
            while !moves.is_empty() {
                let mv = moves.swap_remove(self.rng.random_range(0..moves.len()));
                let candidate = Self::apply(&d, &mv);
                if self.bounds.admits_size(&self.raw_model(&candidate)) {
                    next = Some(candidate);
                    break;
                }
            }
            match next {
                Some(n) => d = n,
                None => break,
            }
        }
        d
    }

    /// Draws a derivation whose model satisfies the bounds.
    pub fn sample_derivation(&mut self) -> Derivation {
        for _ in 0..STRICT_ATTEMPTS {
            let d = self.grow();
            if self.bounds.admits(&self.raw_model(&d)) {
                return d;
            }
        }
        Derivation::new(self.grammar.initials()[0].name())
    }

    /// Draws a canonical model within the bounds.
    pub fn sample_model(&mut self) -> NarmaxModel {
        let d = self.sample_derivation();
        let tree = d
            .derive(&self.grammar)
            .expect("sampled derivations are well-formed");
        let model = derived_to_model(&tree).expect("grammar must be a NARMAX grammar");
        model
            .with_mode(self.bounds.mode)
            .expect("sample was checked against the mode")
    }
}

/// One model sampled from the full NARMAX grammar.
pub fn sample_model(cfg: &SampleConfig) -> NarmaxModel {
    Sampler::new(build_gn().into_grammar(), cfg).sample_model()
}

/// Caps used when a bound is effectively unlimited.
const TERM_CAP: usize = 6;
const DELAY_SPAN_CAP: u32 = 8;
const EXPONENT_CAP: u32 = 3;

/// Draws a canonical model directly in model space: up to `max_terms`
/// terms of one or two distinct factors each, within the delay, exponent
/// and mode bounds. Ignores `max_adjunctions`.
pub fn random_model<R: Rng + ?Sized>(bounds: &GenBounds, rng: &mut R) -> NarmaxModel {
    let signals: Vec<(SignalKind, u32, u32)> = SignalKind::ALL
        .into_iter()
        .filter_map(|s| {
            let lo = Factor::min_delay(s, bounds.mode);
            let hi = bounds.max_delay(s).min(lo.saturating_add(DELAY_SPAN_CAP));
            (lo <= hi).then_some((s, lo, hi))
        })
        .collect();
    let max_exp = bounds.max_exponent.min(EXPONENT_CAP);
    let max_terms = if signals.is_empty() || max_exp == 0 {
        0
    } else {
        bounds.max_terms.min(TERM_CAP)
    };

    let p = rng.random_range(0..=max_terms);
    let mut terms = Vec::with_capacity(p);
    for i in 0..p {
        let mut term = Monomial::new(i as u32 + 1);
        for _ in 0..rng.random_range(1..=2) {
            let &(s, lo, hi) = signals.choose(rng).expect("signals is not empty");
            let delay = rng.random_range(lo..=hi);
            if term.exponent(s, delay) == 0 {
                term.multiply(Factor::new(s, delay), rng.random_range(1..=max_exp));
            }
        }
        terms.push(term);
    }
    NarmaxModel::new(terms, bounds.mode)
        .expect("delays respect the mode")
        .canonicalize()
}
