use crate::model::{Mode, NarmaxModel, SignalKind};

/// Limits on generated structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenBounds {
    /// Maximum number of operations (edges) in a derivation.
    pub max_adjunctions: usize,
    pub max_terms: usize,
    pub max_delay_u: u32,
    pub max_delay_y: u32,
    pub max_delay_xi: u32,
    /// Maximum exponent of any single factor.
    pub max_exponent: u32,
    pub mode: Mode,
}

impl Default for GenBounds {
    fn default() -> Self {
        GenBounds {
            max_adjunctions: 6,
            max_terms: 3,
            max_delay_u: 3,
            max_delay_y: 3,
            max_delay_xi: 3,
            max_exponent: 2,
            mode: Mode::Extended,
        }
    }
}

impl GenBounds {
    /// Bounds that only limit the derivation size.
    pub fn adjunctions(max: usize) -> Self {
        GenBounds {
            max_adjunctions: max,
            max_terms: usize::MAX,
            max_delay_u: u32::MAX,
            max_delay_y: u32::MAX,
            max_delay_xi: u32::MAX,
            max_exponent: u32::MAX,
            mode: Mode::Extended,
        }
    }

    pub fn max_delay(&self, signal: SignalKind) -> u32 {
        match signal {
            SignalKind::Input => self.max_delay_u,
            SignalKind::Output => self.max_delay_y,
            SignalKind::Noise => self.max_delay_xi,
        }
    }

    /// Whether a model fits the term, delay, exponent and mode limits.
    pub fn admits(&self, m: &NarmaxModel) -> bool {
        m.len() <= self.max_terms
            && m.terms().iter().all(|t| {
                t.check_causality(self.mode).is_ok()
                    && t.factors()
                        .all(|(f, e)| f.delay <= self.max_delay(f.signal) && e <= self.max_exponent)
            })
    }

    /// [`GenBounds::admits`] without the mode check. Unlike the mode check,
    /// this only gets harder to satisfy as a derivation grows.
    pub(crate) fn admits_size(&self, m: &NarmaxModel) -> bool {
        GenBounds {
            mode: Mode::Extended,
            ..*self
        }
        .admits(m)
    }
}
