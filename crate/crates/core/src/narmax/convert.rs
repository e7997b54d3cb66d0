//! Conversions between models and derivation trees.

use crate::model::{Factor, Mode, Monomial, NarmaxModel, NbjModel, SignalKind};
use crate::tag::{Derivation, Grammar, SyntacticTree};

use super::catalog::{
    build_gn, build_gnbj, slot, token, Side, ADDITIVE_FACTOR, ADDITIVE_PRODUCT, GN_SIDE,
    MULTIPLICATIVE_FACTOR, NBJ_NOISE_SIDE, NBJ_PROCESS_SIDE,
};
use super::error::NarmaxError;

/// Order in which the first factor of a term is chosen and in which the
/// remaining factors are multiplied in: input, noise, output.
const FACTOR_ORDER: [SignalKind; 3] = [SignalKind::Input, SignalKind::Noise, SignalKind::Output];

/// Delay already carried by a signal's factor tree.
fn built_in_delay(s: SignalKind) -> u32 {
    if s == SignalKind::Output {
        1
    } else {
        0
    }
}

/// A chain of `n` delay trees, or `None` for `n = 0`.
fn delay_chain(side: &Side, n: u32) -> Option<Derivation> {
    (0..n).fold(None, |inner, _| {
        let d = Derivation::new(side.delay);
        Some(match inner {
            Some(inner) => d.adjoin("ε", inner),
            None => d,
        })
    })
}

fn with_delays(d: Derivation, side: &Side, address: &str, f: Factor) -> Derivation {
    match delay_chain(side, f.delay - built_in_delay(f.signal)) {
        Some(chain) => d.adjoin(address, chain),
        None => d,
    }
}

fn tree_for(
    names: &[Option<&'static str>; 3],
    s: SignalKind,
    what: &str,
) -> Result<&'static str, NarmaxError> {
    names[slot(s)].ok_or_else(|| {
        NarmaxError::SignalInWrongPart(format!("no {} tree for {}", what, s.text_name()))
    })
}

/// Derivation of one term: an additive tree for the first factor and a
/// left-to-right chain of multiplicative trees for the rest, each with the
/// delay trees its lag needs.
fn term_derivation(term: &Monomial, side: &Side) -> Result<Derivation, NarmaxError> {
    let sets = term.index_sets();
    let first = FACTOR_ORDER
        .iter()
        .find_map(|&s| sets.of(s).first().map(|&d| Factor::new(s, d)))
        .ok_or_else(|| {
            NarmaxError::Unrepresentable(format!("term c{} has no factors", term.coeff_id))
        })?;

    let mut rest = Vec::new();
    for s in FACTOR_ORDER {
        for &d in sets.of(s) {
            let f = Factor::new(s, d);
            let mut e = term.exponent(s, d);
            if f == first {
                e -= 1;
            }
            rest.extend(std::iter::repeat_n(f, e as usize));
        }
    }

    let mut product: Option<Derivation> = None;
    for &f in rest.iter().rev() {
        let name = tree_for(&side.multiplicative, f.signal, "multiplicative")?;
        let mut m = with_delays(Derivation::new(name), side, MULTIPLICATIVE_FACTOR, f);
        if let Some(inner) = product {
            m = m.adjoin("ε", inner);
        }
        product = Some(m);
    }

    let name = tree_for(&side.additive, first.signal, "additive")?;
    let mut d = with_delays(Derivation::new(name), side, ADDITIVE_FACTOR, first);
    if let Some(p) = product {
        d = d.adjoin(ADDITIVE_PRODUCT, p);
    }
    Ok(d)
}

/// Chain of additive trees whose yield lists `terms` left to right.
fn terms_chain(terms: &[Monomial], side: &Side) -> Result<Option<Derivation>, NarmaxError> {
    let mut chain: Option<Derivation> = None;
    for t in terms {
        let mut d = term_derivation(t, side)?;
        if let Some(prev) = chain {
            d = d.adjoin("ε", prev);
        }
        chain = Some(d);
    }
    Ok(chain)
}

/// Builds the derivation tree of a model in the NARMAX grammar.
///
/// Terms appear in the derived yield in the model's term order. A term
/// with no factors (a constant) has no tree and is rejected, as is a
/// current-noise factor when the model is in strict mode.
pub fn model_to_derivation(m: &NarmaxModel) -> Result<Derivation, NarmaxError> {
    for t in m.terms() {
        t.check_causality(m.mode())
            .map_err(|e| NarmaxError::Unrepresentable(e.to_string()))?;
    }
    let root = Derivation::new(GN_SIDE.initial);
    Ok(match terms_chain(m.terms(), &GN_SIDE)? {
        Some(chain) => root.adjoin(GN_SIDE.attach, chain),
        None => root,
    })
}

/// Builds the derivation tree of an NBJ model in the NBJ grammar.
pub fn nbj_model_to_derivation(m: &NbjModel) -> Result<Derivation, NarmaxError> {
    let mut root = Derivation::new(NBJ_PROCESS_SIDE.initial);
    if let Some(f) = terms_chain(m.process(), &NBJ_PROCESS_SIDE)? {
        root = root.adjoin(NBJ_PROCESS_SIDE.attach, f);
    }
    if let Some(g) = terms_chain(m.noise().terms(), &NBJ_NOISE_SIDE)? {
        root = root.adjoin(NBJ_NOISE_SIDE.attach, g);
    }
    Ok(root)
}

fn push_factor(out: &mut Vec<String>, side: &Side, f: Factor) {
    out.push(side.signal_tokens[slot(f.signal)].unwrap().to_owned());
    out.extend(std::iter::repeat_n(
        token::DELAY.to_owned(),
        f.delay as usize,
    ));
}

fn side_yield(terms: &[Monomial], side: &Side, out: &mut Vec<String>) {
    for t in terms {
        out.push(token::COEFF.to_owned());
        for (f, e) in t.factors() {
            for _ in 0..e {
                out.push(token::TIMES.to_owned());
                push_factor(out, side, f);
            }
        }
        out.push(token::PLUS.to_owned());
    }
    out.push(side.base.to_owned());
}

/// The token string of a model: `c × s q⁻¹… × … + … + ξ`.
///
/// Factor order inside a term follows the model's own factor order, so this
/// equals the derived yield only up to reordering of factors within terms.
pub fn model_yield(m: &NarmaxModel) -> Vec<String> {
    let mut out = Vec::new();
    side_yield(m.terms(), &GN_SIDE, &mut out);
    out
}

/// The token string of an NBJ model, `f-part , g-part`.
pub fn nbj_model_yield(m: &NbjModel) -> Vec<String> {
    let mut out = Vec::new();
    side_yield(m.process(), &NBJ_PROCESS_SIDE, &mut out);
    out.push(token::COMMA.to_owned());
    side_yield(m.noise().terms(), &NBJ_NOISE_SIDE, &mut out);
    out
}

struct YieldParser<'a> {
    tokens: &'a [String],
    pos: usize,
    /// Index of `tokens[0]` in the full yield, for error positions.
    offset: usize,
}

impl<'a> YieldParser<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.tokens.get(self.pos).map(String::as_str)
    }

    fn error(&self, msg: impl Into<String>) -> NarmaxError {
        NarmaxError::YieldNotInLanguage {
            index: self.offset + self.pos,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), NarmaxError> {
        match self.peek() {
            Some(t) if t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error(format!("expected `{}`, found `{}`", tok, t))),
            None => Err(self.error(format!("expected `{}` at end of yield", tok))),
        }
    }

    fn factor(&mut self, side: &Side) -> Result<Factor, NarmaxError> {
        let signal = match self.peek() {
            Some(t) => FACTOR_ORDER
                .into_iter()
                .find(|&s| side.signal_tokens[slot(s)] == Some(t))
                .ok_or_else(|| self.error(format!("expected a signal, found `{}`", t)))?,
            None => return Err(self.error("expected a signal at end of yield")),
        };
        self.pos += 1;
        let mut delay = 0;
        while self.peek() == Some(token::DELAY) {
            self.pos += 1;
            delay += 1;
        }
        if delay < built_in_delay(signal) {
            return Err(self.error(format!("{} without a delay", signal.text_name())));
        }
        Ok(Factor::new(signal, delay))
    }

    /// `(c × factor (× factor)* +)* base`
    fn side(&mut self, side: &Side) -> Result<Vec<Monomial>, NarmaxError> {
        let mut terms = Vec::new();
        while self.peek() == Some(token::COEFF) {
            self.pos += 1;
            let mut term = Monomial::new(terms.len() as u32 + 1);
            loop {
                self.expect(token::TIMES)?;
                term.multiply(self.factor(side)?, 1);
                if self.peek() != Some(token::TIMES) {
                    break;
                }
            }
            self.expect(token::PLUS)?;
            terms.push(term);
        }
        self.expect(side.base)?;
        if let Some(t) = self.peek() {
            return Err(self.error(format!("trailing `{}`", t)));
        }
        Ok(terms)
    }
}

fn parse_side(tokens: &[String], offset: usize, side: &Side) -> Result<Vec<Monomial>, NarmaxError> {
    if let Some((i, t)) = tokens
        .iter()
        .enumerate()
        .find(|(_, t)| side.foreign.contains(&t.as_str()))
    {
        return Err(NarmaxError::SignalInWrongPart(format!(
            "`{}` at token {}",
            t,
            offset + i
        )));
    }
    YieldParser {
        tokens,
        pos: 0,
        offset,
    }
    .side(side)
}

/// Reads a model off a NARMAX yield. Terms are numbered left to right;
/// the result is not canonicalized.
pub fn model_from_yield(tokens: &[String]) -> Result<NarmaxModel, NarmaxError> {
    let terms = parse_side(tokens, 0, &GN_SIDE)?;
    Ok(NarmaxModel::new(terms, Mode::Extended)?)
}

/// Reads the model represented by a saturated derived tree of the NARMAX
/// grammar, in canonical form.
pub fn derived_to_model(tree: &SyntacticTree) -> Result<NarmaxModel, NarmaxError> {
    if !tree.is_saturated() {
        return Err(NarmaxError::NotSaturated);
    }
    Ok(model_from_yield(&tree.yield_tokens())?.canonicalize())
}

/// Reads an NBJ model off a yield `f-part , g-part`.
pub fn nbj_model_from_yield(tokens: &[String]) -> Result<NbjModel, NarmaxError> {
    let commas: Vec<usize> = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| *t == token::COMMA)
        .map(|(i, _)| i)
        .collect();
    let split = match commas.as_slice() {
        [i] => *i,
        [] => {
            return Err(NarmaxError::YieldNotInLanguage {
                index: tokens.len(),
                msg: "missing `,` between process and noise parts".into(),
            })
        }
        [_, second, ..] => {
            return Err(NarmaxError::YieldNotInLanguage {
                index: *second,
                msg: "more than one `,`".into(),
            })
        }
    };
    let process = parse_side(&tokens[..split], 0, &NBJ_PROCESS_SIDE)?;
    let noise = parse_side(&tokens[split + 1..], split + 1, &NBJ_NOISE_SIDE)?;
    Ok(NbjModel::new(
        process,
        NarmaxModel::new(noise, Mode::Extended)?,
    )?)
}

/// Reads the NBJ model represented by a saturated derived tree of the NBJ
/// grammar, in canonical form.
pub fn nbj_derived_to_model(tree: &SyntacticTree) -> Result<NbjModel, NarmaxError> {
    if !tree.is_saturated() {
        return Err(NarmaxError::NotSaturated);
    }
    Ok(nbj_model_from_yield(&tree.yield_tokens())?.canonicalize())
}

/// Checks that a model survives model → derivation → derived tree → model
/// with the same structure (coefficient values are not compared).
pub fn roundtrip_check(m: &NarmaxModel) -> Result<bool, NarmaxError> {
    roundtrip_with(m, build_gn().grammar())
}

pub(crate) fn roundtrip_with(m: &NarmaxModel, gn: &Grammar) -> Result<bool, NarmaxError> {
    let canonical = m.canonicalize();
    let tree = model_to_derivation(&canonical)?.derive(gn)?;
    Ok(derived_to_model(&tree)?.same_structure(&canonical))
}

/// NBJ counterpart of [`roundtrip_check`].
pub fn nbj_roundtrip_check(m: &NbjModel) -> Result<bool, NarmaxError> {
    let canonical = m.canonicalize();
    let tree = nbj_model_to_derivation(&canonical)?.derive(build_gnbj().grammar())?;
    let back = nbj_derived_to_model(&tree)?;
    let same_process = back.process().len() == canonical.process().len()
        && back
            .process()
            .iter()
            .zip(canonical.process())
            .all(|(a, b)| a.coeff_id == b.coeff_id && a.factor_map() == b.factor_map());
    Ok(same_process && back.noise().same_structure(canonical.noise()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use SignalKind::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_owned).collect()
    }

    fn narmax_example() -> NarmaxModel {
        NarmaxModel::new(
            vec![
                Monomial::new(1).times(Output, 1, 2),
                Monomial::new(2).times(Input, 0, 1),
                Monomial::new(3)
                    .times(Noise, 1, 1)
                    .times(Noise, 2, 1)
                    .times(Noise, 0, 1),
            ],
            Mode::Extended,
        )
        .unwrap()
    }

    #[test]
    fn noise_only_is_alpha1() {
        let d = model_to_derivation(&NarmaxModel::noise_only()).unwrap();
        assert_eq!(d.to_string(), "alpha1");
        let t = d.derive(build_gn().grammar()).unwrap();
        assert_eq!(t.yield_tokens(), vec!["ξ"]);
        assert_eq!(derived_to_model(&t).unwrap(), NarmaxModel::noise_only());
    }

    #[test]
    fn arx_derivation_and_yield() {
        let m: NarmaxModel = "c1*y[-1] + c2*u[0] + xi".parse().unwrap();
        let d = model_to_derivation(&m).unwrap();
        assert_eq!(d.to_string(), "alpha1[adj@ε -> beta1[adj@ε -> beta2]]");
        let t = d.derive(build_gn().grammar()).unwrap();
        assert_eq!(t.yield_tokens(), toks("c × y q⁻¹ + c × u + ξ"));
        assert_eq!(derived_to_model(&t).unwrap(), m);
    }

    #[test]
    fn narx_squared_output() {
        let m: NarmaxModel = "c1*y[-1]^2 + c2*u[0] + xi".parse().unwrap();
        let d = model_to_derivation(&m).unwrap();
        assert_eq!(
            d.to_string(),
            "alpha1[adj@ε -> beta1[adj@ε -> beta2[adj@1 -> beta5]]]"
        );
        let t = d.derive(build_gn().grammar()).unwrap();
        assert_eq!(t.yield_tokens(), toks("c × y q⁻¹ × y q⁻¹ + c × u + ξ"));
        assert!(roundtrip_check(&m).unwrap());
    }

    #[test]
    fn noise_products_need_delay_trees() {
        let m = narmax_example();
        let d = model_to_derivation(&m).unwrap();
        // first factor ξ_k; then ξ_{k-1} and ξ_{k-2} multiplied in
        assert_eq!(
            d.to_string(),
            "alpha1[adj@ε -> beta3[adj@ε -> beta1[adj@ε -> beta2[adj@1 -> beta5]], \
             adj@1 -> beta6[adj@ε -> beta6[adj@3 -> beta7[adj@ε -> beta7]], adj@3 -> beta7]]]"
        );
        let t = d.derive(build_gn().grammar()).unwrap();
        assert_eq!(
            t.yield_tokens(),
            toks("c × y q⁻¹ × y q⁻¹ + c × u + c × ξ × ξ q⁻¹ × ξ q⁻¹ q⁻¹ + ξ")
        );
        assert_eq!(derived_to_model(&t).unwrap(), m);
    }

    #[test]
    fn yield_matches_model_yield() {
        let gn = build_gn();
        for src in [
            "xi",
            "c1*y[-1] + c2*u[0] + xi",
            "c1*y[-3]*u[-1]^2 + c2*xi[-2] + xi",
        ] {
            let m: NarmaxModel = src.parse().unwrap();
            let t = model_to_derivation(&m)
                .unwrap()
                .derive(gn.grammar())
                .unwrap();
            let mut derived = t.yield_tokens();
            let mut direct = model_yield(&m);
            // same multiset of tokens, and identical for single-factor terms
            derived.sort();
            direct.sort();
            assert_eq!(derived, direct, "{src}");
        }
    }

    #[test]
    fn constant_term_is_unrepresentable() {
        let m = NarmaxModel::new(vec![Monomial::new(1)], Mode::Extended).unwrap();
        assert!(matches!(
            model_to_derivation(&m),
            Err(NarmaxError::Unrepresentable(_))
        ));
    }

    #[test]
    fn unsaturated_tree_is_rejected() {
        let t: SyntacticTree = "expr0(expr1↓ op(+) expr0(ξ))".parse().unwrap();
        assert_eq!(derived_to_model(&t), Err(NarmaxError::NotSaturated));
    }

    #[test]
    fn malformed_yields() {
        for (bad, index) in [
            ("", 0),
            ("c × u", 3),
            ("c + ξ", 1),
            ("c × y + ξ", 3),
            ("ξ ξ", 1),
            ("c × q⁻¹ + ξ", 2),
            ("c × u + c", 5),
        ] {
            match model_from_yield(&toks(bad)) {
                Err(NarmaxError::YieldNotInLanguage { index: i, .. }) => {
                    assert_eq!(i, index, "{bad:?}")
                }
                other => panic!("{bad:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn yield_with_extra_delays_reads_lags() {
        let m = model_from_yield(&toks("c × u q⁻¹ q⁻¹ × y q⁻¹ q⁻¹ q⁻¹ + ξ")).unwrap();
        assert_eq!(m.to_string(), "c1*y[-3]*u[-2] + xi");
    }

    #[test]
    fn nbj_roundtrip_and_yield() {
        let m = NbjModel::new(
            vec![
                Monomial::new(1).times(Output, 1, 1),
                Monomial::new(2).times(Input, 1, 1),
            ],
            "c1*y[-1]*xi[-1] + xi".parse().unwrap(),
        )
        .unwrap();
        let d = nbj_model_to_derivation(&m).unwrap();
        let t = d.derive(build_gnbj().grammar()).unwrap();
        assert_eq!(
            t.yield_tokens(),
            toks("c × ŷ q⁻¹ + c × u q⁻¹ + 0 , c × ξ q⁻¹ × v q⁻¹ + ξ")
        );
        assert_eq!(nbj_derived_to_model(&t).unwrap(), m.canonicalize());
        assert!(nbj_roundtrip_check(&m).unwrap());
    }

    #[test]
    fn nbj_base_model() {
        let d = nbj_model_to_derivation(&NbjModel::default()).unwrap();
        let t = d.derive(build_gnbj().grammar()).unwrap();
        assert_eq!(t.yield_tokens(), toks("0 , ξ"));
        assert_eq!(nbj_derived_to_model(&t).unwrap(), NbjModel::default());
    }

    #[test]
    fn nbj_single_process_output_term() {
        let g = build_gnbj();
        let d = Derivation::new("alpha1").adjoin("1", Derivation::new("fbeta2"));
        let t = d.derive(g.grammar()).unwrap();
        assert_eq!(t.yield_tokens(), toks("c × ŷ q⁻¹ + 0 , ξ"));
        let m = nbj_derived_to_model(&t).unwrap();
        assert_eq!(m.to_string(), "c1*yhat[-1] + 0 , xi");
    }

    #[test]
    fn nbj_signals_in_wrong_part() {
        for bad in [
            "c × ξ + 0 , ξ",
            "c × v q⁻¹ + 0 , ξ",
            "0 , c × ŷ q⁻¹ + ξ",
            "ξ , ξ",
        ] {
            assert!(
                matches!(
                    nbj_model_from_yield(&toks(bad)),
                    Err(NarmaxError::SignalInWrongPart(_))
                ),
                "{bad}"
            );
        }
        assert!(matches!(
            nbj_model_from_yield(&toks("0 ξ")),
            Err(NarmaxError::YieldNotInLanguage { .. })
        ));
        assert!(matches!(
            nbj_model_from_yield(&toks("0 , ξ , ξ")),
            Err(NarmaxError::YieldNotInLanguage { index: 3, .. })
        ));
    }
}
