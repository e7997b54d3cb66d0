use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::error::ModelError;

/// The three signals a NARMAX term can draw factors from.
///
/// The variant order (output, input, noise) is the canonical factor order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SignalKind {
    Output,
    Input,
    Noise,
}

impl SignalKind {
    pub const ALL: [SignalKind; 3] = [SignalKind::Output, SignalKind::Input, SignalKind::Noise];

    /// Name used in the model text format.
    pub fn text_name(self) -> &'static str {
        match self {
            SignalKind::Input => "u",
            SignalKind::Output => "y",
            SignalKind::Noise => "xi",
        }
    }
}

impl fmt::Display for SignalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text_name())
    }
}

/// Whether noise factors may use the current sample `ξ_k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Noise factors need delay ≥ 1.
    Strict,
    /// Noise factors may have delay 0.
    #[default]
    Extended,
}

/// A delayed signal `s_{k-delay}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub signal: SignalKind,
    pub delay: u32,
}

impl Factor {
    pub fn new(signal: SignalKind, delay: u32) -> Self {
        Factor { signal, delay }
    }

    /// Smallest delay this factor may have in a causal model.
    pub fn min_delay(signal: SignalKind, mode: Mode) -> u32 {
        match (signal, mode) {
            (SignalKind::Output, _) => 1,
            (SignalKind::Noise, Mode::Strict) => 1,
            _ => 0,
        }
    }
}

/// One model term `c_i · Π s_{k-d}^e`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coeff_id: u32,
    pub coeff_value: Option<f64>,
    factors: BTreeMap<Factor, u32>,
}

impl Monomial {
    pub fn new(coeff_id: u32) -> Self {
        Monomial {
            coeff_id,
            coeff_value: None,
            factors: BTreeMap::new(),
        }
    }

    /// Multiplies in `signal_{k-delay}^exponent`. A zero exponent is a no-op.
    pub fn times(mut self, signal: SignalKind, delay: u32, exponent: u32) -> Self {
        self.multiply(Factor::new(signal, delay), exponent);
        self
    }

    pub fn with_value(mut self, value: f64) -> Self {
        self.coeff_value = Some(value);
        self
    }

    pub fn multiply(&mut self, factor: Factor, exponent: u32) {
        if exponent > 0 {
            *self.factors.entry(factor).or_insert(0) += exponent;
        }
    }

    /// Factors in canonical order with their exponents.
    pub fn factors(&self) -> impl Iterator<Item = (Factor, u32)> + '_ {
        self.factors.iter().map(|(&f, &e)| (f, e))
    }

    pub fn factor_map(&self) -> &BTreeMap<Factor, u32> {
        &self.factors
    }

    pub fn exponent(&self, signal: SignalKind, delay: u32) -> u32 {
        self.factors
            .get(&Factor::new(signal, delay))
            .copied()
            .unwrap_or(0)
    }

    /// Total degree (sum of exponents).
    pub fn degree(&self) -> u32 {
        self.factors.values().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn uses(&self, signal: SignalKind) -> bool {
        self.factors.keys().any(|f| f.signal == signal)
    }

    pub fn max_delay(&self, signal: SignalKind) -> Option<u32> {
        self.factors
            .keys()
            .filter(|f| f.signal == signal)
            .map(|f| f.delay)
            .max()
    }

    pub fn index_sets(&self) -> TermIndexSets {
        let mut sets = TermIndexSets::default();
        for f in self.factors.keys() {
            sets.of_mut(f.signal).insert(f.delay);
        }
        sets
    }

    /// Rejects factors that read the present or future output (or the
    /// present noise in strict mode).
    pub fn check_causality(&self, mode: Mode) -> Result<(), ModelError> {
        for f in self.factors.keys() {
            if f.delay < Factor::min_delay(f.signal, mode) {
                return Err(ModelError::CausalityViolation(format!(
                    "{}[{}] in term c{}",
                    f.signal, f.delay, self.coeff_id
                )));
            }
        }
        Ok(())
    }

    /// Key for the canonical term order: the factor list compared
    /// lexicographically, with exponents.
    pub(crate) fn order_key(&self) -> Vec<(Factor, u32)> {
        self.factors().collect()
    }

    pub(crate) fn evaluate(&self, read: impl Fn(Factor) -> f64) -> f64 {
        self.factors
            .iter()
            .map(|(&f, &e)| read(f).powi(e as i32))
            .product()
    }
}

/// The delay sets `J` (input), `L` (noise) and `M` (output) of one term.
///
/// Iterating a set yields its strictly increasing delay sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermIndexSets {
    pub input: BTreeSet<u32>,
    pub noise: BTreeSet<u32>,
    pub output: BTreeSet<u32>,
}

impl TermIndexSets {
    pub fn of(&self, signal: SignalKind) -> &BTreeSet<u32> {
        match signal {
            SignalKind::Input => &self.input,
            SignalKind::Noise => &self.noise,
            SignalKind::Output => &self.output,
        }
    }

    fn of_mut(&mut self, signal: SignalKind) -> &mut BTreeSet<u32> {
        match signal {
            SignalKind::Input => &mut self.input,
            SignalKind::Noise => &mut self.noise,
            SignalKind::Output => &mut self.output,
        }
    }

    pub fn sequence(&self, signal: SignalKind) -> Vec<u32> {
        self.of(signal).iter().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.input.is_empty() && self.noise.is_empty() && self.output.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SignalKind::*;

    #[test]
    fn index_sets_of_squared_output() {
        let t = Monomial::new(1).times(Output, 1, 2);
        let s = t.index_sets();
        assert_eq!(s.output, BTreeSet::from([1]));
        assert!(s.input.is_empty() && s.noise.is_empty());
        assert_eq!(s.sequence(Output), vec![1]);
    }

    #[test]
    fn index_sets_of_noise_product() {
        let t = Monomial::new(3)
            .times(Noise, 1, 1)
            .times(Noise, 2, 1)
            .times(Noise, 0, 1);
        assert_eq!(t.index_sets().noise, BTreeSet::from([0, 1, 2]));
        assert_eq!(t.index_sets().sequence(Noise), vec![0, 1, 2]);
        assert_eq!(t.degree(), 3);
    }

    #[test]
    fn constant_term_has_empty_sets() {
        let t = Monomial::new(1);
        assert!(t.index_sets().is_empty());
        assert!(t.is_constant());
        assert_eq!(t.degree(), 0);
    }

    #[test]
    fn zero_exponent_is_absent() {
        let t = Monomial::new(1).times(Input, 0, 0);
        assert!(t.is_constant());
        let t = Monomial::new(1).times(Input, 2, 1).times(Input, 2, 2);
        assert_eq!(t.exponent(Input, 2), 3);
    }

    #[test]
    fn causality() {
        assert!(Monomial::new(1)
            .times(Output, 0, 1)
            .check_causality(Mode::Extended)
            .is_err());
        let xi0 = Monomial::new(1).times(Noise, 0, 1);
        assert!(xi0.check_causality(Mode::Extended).is_ok());
        assert!(xi0.check_causality(Mode::Strict).is_err());
        assert!(Monomial::new(1)
            .times(Input, 0, 1)
            .check_causality(Mode::Strict)
            .is_ok());
    }
}
