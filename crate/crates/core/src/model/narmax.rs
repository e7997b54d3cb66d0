use std::collections::BTreeSet;
use std::fmt;

use super::error::ModelError;
use super::monomial::{Factor, Mode, Monomial, SignalKind};

/// A polynomial NARMAX model in product form:
///
/// `y_k = Σ_i c_i Π u_{k-j}^{b_ij} Π ξ_{k-l}^{d_il} Π y_{k-m}^{a_im} + ξ_k`
///
/// The additive `ξ_k` is implicit. With no terms this is `y_k = ξ_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct NarmaxModel {
    terms: Vec<Monomial>,
    mode: Mode,
}

impl Default for NarmaxModel {
    fn default() -> Self {
        Self::noise_only()
    }
}

impl NarmaxModel {
    /// `y_k = ξ_k`.
    pub fn noise_only() -> Self {
        NarmaxModel {
            terms: Vec::new(),
            mode: Mode::Extended,
        }
    }

    pub fn new(terms: Vec<Monomial>, mode: Mode) -> Result<Self, ModelError> {
        for t in &terms {
            t.check_causality(mode)?;
        }
        Ok(NarmaxModel { terms, mode })
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Switches mode, re-checking causality.
    pub fn with_mode(self, mode: Mode) -> Result<Self, ModelError> {
        NarmaxModel::new(self.terms, mode)
    }

    /// Number of terms `p`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sorts terms, merges terms with equal factor maps and renumbers the
    /// coefficient slots `1..=p` in the new order.
    ///
    /// Merged numeric coefficients are summed; if any merged slot is
    /// symbolic the result is symbolic.
    pub fn canonicalize(&self) -> NarmaxModel {
        let mut sorted: Vec<&Monomial> = self.terms.iter().collect();
        sorted.sort_by_cached_key(|t| t.order_key());
        let mut merged: Vec<Monomial> = Vec::with_capacity(sorted.len());
        for t in sorted {
            match merged.last_mut() {
                Some(last) if last.factor_map() == t.factor_map() => {
                    last.coeff_value = match (last.coeff_value, t.coeff_value) {
                        (Some(a), Some(b)) => Some(a + b),
                        _ => None,
                    };
                }
                _ => merged.push(t.clone()),
            }
        }
        for (i, t) in merged.iter_mut().enumerate() {
            t.coeff_id = i as u32 + 1;
        }
        NarmaxModel {
            terms: merged,
            mode: self.mode,
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonicalize()
    }

    /// Equality of term structure and slot numbering, ignoring numeric
    /// coefficient values.
    pub fn same_structure(&self, other: &NarmaxModel) -> bool {
        self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|(a, b)| a.coeff_id == b.coeff_id && a.factor_map() == b.factor_map())
    }

    /// Copy with every coefficient value dropped.
    pub fn symbolic(&self) -> NarmaxModel {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff_value = None;
        }
        out
    }

    /// Maximum lags `(n_u, n_y, n_ξ)`; 0 for an absent signal.
    pub fn max_lags(&self) -> (u32, u32, u32) {
        let lag = |s| {
            self.terms
                .iter()
                .filter_map(|t| t.max_delay(s))
                .max()
                .unwrap_or(0)
        };
        (
            lag(SignalKind::Input),
            lag(SignalKind::Output),
            lag(SignalKind::Noise),
        )
    }

    /// The attached numeric coefficients, if every slot has one.
    pub fn coefficient_values(&self) -> Option<Vec<f64>> {
        self.terms.iter().map(|t| t.coeff_value).collect()
    }

    /// Runs the model forward with zero initial conditions.
    ///
    /// `coeffs[i]` is the value of the `i`-th term's coefficient.
    pub fn simulate(&self, coeffs: &[f64], u: &[f64], xi: &[f64]) -> Result<Vec<f64>, ModelError> {
        if coeffs.len() != self.terms.len() {
            return Err(ModelError::LengthMismatch(format!(
                "{} coefficients for {} terms",
                coeffs.len(),
                self.terms.len()
            )));
        }
        if u.len() != xi.len() {
            return Err(ModelError::LengthMismatch(format!(
                "input has {} samples, noise has {}",
                u.len(),
                xi.len()
            )));
        }
        let mut y = Vec::with_capacity(u.len());
        for k in 0..u.len() {
            let read = |f: Factor| {
                let Some(idx) = k.checked_sub(f.delay as usize) else {
                    return 0.0;
                };
                match f.signal {
                    SignalKind::Input => u[idx],
                    SignalKind::Noise => xi[idx],
                    SignalKind::Output => y[idx],
                }
            };
            let value: f64 = self
                .terms
                .iter()
                .zip(coeffs)
                .map(|(t, c)| c * t.evaluate(read))
                .sum();
            y.push(value + xi[k]);
        }
        Ok(y)
    }

    /// Structural model classes this model belongs to.
    pub fn classify(&self) -> BTreeSet<ModelClass> {
        let only = |allowed: &[SignalKind]| {
            self.terms
                .iter()
                .all(|t| t.factors().all(|(f, _)| allowed.contains(&f.signal)))
        };
        let linear = self.terms.iter().all(|t| t.degree() <= 1);
        let u_only = only(&[SignalKind::Input]);
        let uy_only = only(&[SignalKind::Input, SignalKind::Output]);

        let mut out = BTreeSet::from([ModelClass::Narmax]);
        if u_only && linear {
            out.insert(ModelClass::Fir);
        }
        if u_only {
            out.insert(ModelClass::Volterra);
        }
        if uy_only && linear {
            out.insert(ModelClass::Arx);
        }
        if linear {
            out.insert(ModelClass::Armax);
        }
        if uy_only {
            out.insert(ModelClass::Narx);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelClass {
    Fir,
    Volterra,
    Arx,
    Armax,
    Narx,
    Narmax,
}

impl ModelClass {
    pub fn name(self) -> &'static str {
        match self {
            ModelClass::Fir => "FIR",
            ModelClass::Volterra => "Volterra",
            ModelClass::Arx => "ARX",
            ModelClass::Armax => "ARMAX",
            ModelClass::Narx => "NARX",
            ModelClass::Narmax => "NARMAX",
        }
    }
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SignalKind::*;

    fn arx_example() -> NarmaxModel {
        "c1*y[-1] + c2*u[0] + xi".parse().unwrap()
    }

    fn narx_example() -> NarmaxModel {
        "c1*y[-1]^2 + c2*u[0] + xi".parse().unwrap()
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
    fn like_terms_merge() {
        let m = NarmaxModel::new(
            vec![
                Monomial::new(1).times(Input, 0, 1).with_value(2.0),
                Monomial::new(2).times(Input, 0, 1).with_value(3.0),
            ],
            Mode::Extended,
        )
        .unwrap();
        let c = m.canonicalize();
        assert_eq!(c.len(), 1);
        assert_eq!(c.terms()[0].coeff_value, Some(5.0));
        assert_eq!(c.terms()[0].coeff_id, 1);
    }

    #[test]
    fn merge_with_symbolic_slot_stays_symbolic() {
        let m = NarmaxModel::new(
            vec![
                Monomial::new(1).times(Input, 0, 1).with_value(2.0),
                Monomial::new(2).times(Input, 0, 1),
            ],
            Mode::Extended,
        )
        .unwrap();
        assert_eq!(m.canonicalize().terms()[0].coeff_value, None);
    }

    #[test]
    fn reference_models_are_canonical() {
        assert!(arx_example().is_canonical());
        assert!(narx_example().is_canonical());
        assert!(narmax_example().is_canonical());
    }

    #[test]
    fn canonicalize_is_idempotent_and_order_free() {
        let m = narmax_example();
        let mut rev = m.terms().to_vec();
        rev.reverse();
        let shuffled = NarmaxModel::new(rev, Mode::Extended).unwrap();
        assert_eq!(shuffled.canonicalize(), m.canonicalize());
        assert_eq!(m.canonicalize().canonicalize(), m.canonicalize());
    }

    #[test]
    fn max_lags_of_examples() {
        assert_eq!(arx_example().max_lags(), (0, 1, 0));
        assert_eq!(NarmaxModel::noise_only().max_lags(), (0, 0, 0));
        assert_eq!(narmax_example().max_lags(), (0, 1, 2));
    }

    #[test]
    fn simulate_pure_noise() {
        let y = NarmaxModel::noise_only()
            .simulate(&[], &[0.0, 0.0], &[0.5, -1.0])
            .unwrap();
        assert_eq!(y, vec![0.5, -1.0]);
    }

    #[test]
    fn simulate_arx_by_hand() {
        // y_0 = 0.5*0 + 2*1 = 2, y_1 = 0.5*2 + 2*1 = 3
        let y = arx_example()
            .simulate(&[0.5, 2.0], &[1.0, 1.0], &[0.0, 0.0])
            .unwrap();
        assert_eq!(y, vec![2.0, 3.0]);
    }

    #[test]
    fn simulate_zero_dynamics() {
        let y = narmax_example()
            .simulate(&[1.3, -2.0, 0.7], &[0.0; 5], &[0.0; 5])
            .unwrap();
        assert_eq!(y, vec![0.0; 5]);
    }

    #[test]
    fn simulate_length_checks() {
        assert!(matches!(
            arx_example().simulate(&[1.0], &[0.0], &[0.0]),
            Err(ModelError::LengthMismatch(_))
        ));
        assert!(matches!(
            arx_example().simulate(&[1.0, 1.0], &[0.0], &[0.0, 0.0]),
            Err(ModelError::LengthMismatch(_))
        ));
    }

    #[test]
    fn classify_examples() {
        use ModelClass::*;
        assert_eq!(
            arx_example().classify(),
            BTreeSet::from([Arx, Armax, Narx, Narmax])
        );
        assert_eq!(narx_example().classify(), BTreeSet::from([Narx, Narmax]));
        assert_eq!(narmax_example().classify(), BTreeSet::from([Narmax]));
        let fir: NarmaxModel = "c1*u[0] + c2*u[-3] + xi".parse().unwrap();
        assert_eq!(
            fir.classify(),
            BTreeSet::from([Fir, Volterra, Arx, Armax, Narx, Narmax])
        );
        let volterra: NarmaxModel = "c1*u[0]*u[-1] + xi".parse().unwrap();
        assert_eq!(
            volterra.classify(),
            BTreeSet::from([Volterra, Narx, Narmax])
        );
        let armax: NarmaxModel = "c1*y[-1] + c2*xi[-1] + xi".parse().unwrap();
        assert_eq!(armax.classify(), BTreeSet::from([Armax, Narmax]));
    }

    #[test]
    fn strict_mode_rejects_current_noise_factor() {
        assert!(narmax_example().with_mode(Mode::Strict).is_err());
        assert!(narx_example().with_mode(Mode::Strict).is_ok());
    }
}
