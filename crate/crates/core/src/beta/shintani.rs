//! Shintani-type infinite products of lower-order Barnes beta transforms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BarnesBeta, EtaMethod, EtaValue};
use crate::error::{Error, Result};
use crate::multigamma::Valued;

/// Grouping of the factors of `η_{M,N}` along the period `a_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShintaniVariant {
    /// `∏_k η_{M-1,N}(q | â_i, b_0 + k a_i)`.
    Shifted,
    /// `∏_k η_{M-1,N}(q + k a_i | â_i, b) / η_{M-1,N}(k a_i | â_i, b)`.
    Ratio,
    /// The same product written with `η_{M-1,N-1}(· | â_i, b̂_j)` at `q + k a_i`
    /// and `q + k a_i + b_j`.
    Reduced,
}

impl ShintaniVariant {
    pub fn from_index(v: u8) -> Option<Self> {
        match v {
            1 => Some(Self::Shifted),
            2 => Some(Self::Ratio),
            3 => Some(Self::Reduced),
            _ => None,
        }
    }
}

fn add(a: Valued, b: Valued) -> Valued {
    Valued {
        value: a.value + b.value,
        error: a.error + b.error,
    }
}

fn sub(a: Valued, b: Valued) -> Valued {
    Valued {
        value: a.value - b.value,
        error: a.error + b.error,
    }
}

impl BarnesBeta {
    fn shintani_domain(&self, q: Complex64, variant: ShintaniVariant, i: usize, j: Option<usize>) -> Result<()> {
        let p = &self.params;
        if p.m() == 0 || p.m() > p.n() {
            return Err(Error::MethodDomain(format!(
                "Shintani factorization needs 1 ≤ M ≤ N, got M = {}, N = {}",
                p.m(),
                p.n()
            )));
        }
        p.check_scale_index(i)?;
        if variant == ShintaniVariant::Reduced {
            match j {
                Some(j) => p.check_shift_index(j)?,
                None => return Err(Error::InvalidParams("the reduced variant needs a shift index j".into())),
            }
        }
        if q.im == 0.0 && q.re <= -p.b0() {
            return Err(Error::OnCut(q));
        }
        Ok(())
    }

    /// Logarithms of the first `count` factors of the chosen product.
    pub fn shintani_log_factors(
        &self,
        q: Complex64,
        variant: ShintaniVariant,
        i: usize,
        j: Option<usize>,
        count: usize,
    ) -> Result<Vec<Valued>> {
        self.shintani_domain(q, variant, i, j)?;
        let ai = self.params.a()[i];
        let mut out = Vec::with_capacity(count);
        match variant {
            ShintaniVariant::Shifted => {
                for k in 0..count {
                    let shifted = self.sibling(self.params.with_shift_added(0, k as f64 * ai)?.without_scale(i)?)?;
                    out.push(shifted.log_eta(q)?);
                }
            }
            ShintaniVariant::Ratio => {
                let lower = self.sibling(self.params.without_scale(i)?)?;
                for k in 0..count {
                    let ka = Complex64::new(k as f64 * ai, 0.0);
                    out.push(sub(lower.log_eta(q + ka)?, lower.log_eta(ka)?));
                }
            }
            ShintaniVariant::Reduced => {
                let j = j.expect("checked above");
                let bj = self.params.b()[j];
                let lower = self.sibling(self.params.without_scale(i)?.without_shift(j)?)?;
                for k in 0..count {
                    let ka = Complex64::new(k as f64 * ai, 0.0);
                    let first = sub(lower.log_eta(q + ka)?, lower.log_eta(ka)?);
                    let second = sub(lower.log_eta(ka + bj)?, lower.log_eta(q + ka + bj)?);
                    out.push(add(first, second));
                }
            }
        }
        Ok(out)
    }

    /// Number of explicit factors used for `q`.
    pub fn shintani_truncation(&self, q: Complex64, i: usize) -> usize {
        let ai = self.params.a()[i];
        (50.0 / ai * q.norm().max(1.0)).ceil() as usize
    }

    /// `η_{M,N}(q)` as a truncated Shintani product.
    ///
    /// After `K + 1` factors the remaining product is exactly
    /// `η_{M,N}(q | a, b_0 + (K + 1) a_i)`, which is evaluated through its
    /// Lévy–Khinchine integral.
    pub fn shintani_product(&self, q: Complex64, variant: ShintaniVariant, i: usize, j: Option<usize>) -> Result<EtaValue> {
        if q == Complex64::new(0.0, 0.0) {
            self.shintani_domain(q, variant, i, j)?;
            return Ok(EtaValue {
                value: Complex64::new(1.0, 0.0),
                method: EtaMethod::ShintaniK,
                est_error: 0.0,
            });
        }
        let count = self.shintani_truncation(q, i) + 1;
        let factors = self.shintani_log_factors(q, variant, i, j, count)?;
        let mut log = factors.into_iter().fold(Valued { value: Complex64::new(0.0, 0.0), error: 0.0 }, add);
        let remainder = self.sibling(self.params.with_shift_added(0, count as f64 * self.params.a()[i])?)?;
        let tail = remainder.levy_exponent_eval(q).map_err(|e| match e {
            Error::QuadratureFailure { .. } => Error::NonConvergence(format!("Shintani remainder at q = {q}: {e}")),
            other => other,
        })?;
        log = add(log, tail);
        let value = log.value.exp();
        Ok(EtaValue {
            value,
            method: EtaMethod::ShintaniK,
            est_error: value.norm() * log.error,
        })
    }
}
