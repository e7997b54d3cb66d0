use std::fmt;

use super::error::ModelError;
use super::monomial::{Mode, Monomial, SignalKind};
use super::narmax::NarmaxModel;
use super::text::write_term;

/// A polynomial non-linear Box-Jenkins model:
///
/// ```text
/// ŷ_k = f(ŷ_{k-1}, …, u_k, …)
/// v_k = g(v_{k-1}, …, u_k, …, ξ_{k-1}, …) + ξ_k
/// y_k = ŷ_k + v_k
/// ```
///
/// Both polynomials reuse [`SignalKind`]: in `process` the `Output` signal is
/// the noise-free output `ŷ`; in `noise` it is the noise process `v`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NbjModel {
    process: Vec<Monomial>,
    noise: NarmaxModel,
}

impl NbjModel {
    pub fn new(process: Vec<Monomial>, noise: NarmaxModel) -> Result<Self, ModelError> {
        for t in &process {
            if t.uses(SignalKind::Noise) {
                return Err(ModelError::SignalNotAllowed(format!(
                    "noise factor in process term c{}",
                    t.coeff_id
                )));
            }
            t.check_causality(Mode::Extended)?;
        }
        Ok(NbjModel { process, noise })
    }

    /// Terms of `f`, over `u` and `ŷ`.
    pub fn process(&self) -> &[Monomial] {
        &self.process
    }

    /// `g` plus the additive `ξ_k`, over `u`, `v` and `ξ`.
    pub fn noise(&self) -> &NarmaxModel {
        &self.noise
    }

    pub fn canonicalize(&self) -> NbjModel {
        let process = NarmaxModel::new(self.process.clone(), Mode::Extended)
            .expect("process terms were checked on construction")
            .canonicalize();
        NbjModel {
            process: process.terms().to_vec(),
            noise: self.noise.canonicalize(),
        }
    }

    /// Runs both equations with zero initial conditions and returns `y`.
    pub fn simulate(
        &self,
        process_coeffs: &[f64],
        noise_coeffs: &[f64],
        u: &[f64],
        xi: &[f64],
    ) -> Result<Vec<f64>, ModelError> {
        // f has no noise input and no additive noise term
        let f = NarmaxModel::new(self.process.clone(), Mode::Extended)?;
        let zeros = vec![0.0; u.len()];
        let y_hat = f.simulate(process_coeffs, u, &zeros)?;
        let v = self.noise.simulate(noise_coeffs, u, xi)?;
        Ok(y_hat.iter().zip(&v).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for NbjModel {
    /// `<f terms> + 0 , <g terms> + xi`, naming `ŷ` as `yhat` and `v` as `v`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let process_name = |s: SignalKind| match s {
            SignalKind::Output => "yhat",
            other => other.text_name(),
        };
        let noise_name = |s: SignalKind| match s {
            SignalKind::Output => "v",
            other => other.text_name(),
        };
        for t in &self.process {
            write_term(f, t, process_name)?;
            f.write_str(" + ")?;
        }
        f.write_str("0 , ")?;
        for t in self.noise.terms() {
            write_term(f, t, noise_name)?;
            f.write_str(" + ")?;
        }
        f.write_str("xi")
    }
}
