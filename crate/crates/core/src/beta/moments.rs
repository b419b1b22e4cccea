//! Integer moments, the Laplace transform series and its Mellin transform.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BarnesBeta, BetaParams, Mode};
use crate::error::{Error, Result};
use crate::euler::{gamma_real, ln_gamma};
use crate::multigamma::GammaParams;
use crate::quadrature::{integrate, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentSign {
    Positive,
    Negative,
}

const TERM_BUDGET: usize = 4000;

/// Both sides of `∫_0^∞ x^{q-1} L(x) dx = Γ(q) η(-q a_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RamanujanCheck {
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_diff: f64,
    /// `∫_0^X` from the power series.
    pub head: f64,
    /// `∫_X^∞` from the Mellin–Barnes integral.
    pub tail: f64,
    pub split: f64,
}

/// Truncated evaluation of the Laplace series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceValue {
    pub value: f64,
    /// Bound on the discarded tail, from `E[β^{k a_i}]` being non-increasing in `k`.
    pub truncation_bound: f64,
    pub rounding_bound: f64,
    pub terms: usize,
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, r| acc * (n - r) as f64 / (r + 1) as f64)
}

impl BarnesBeta {
    fn require_order(&self, what: &str) -> Result<()> {
        if self.params.m() == 0 {
            return Err(Error::InvalidParams(format!("{what} needs M ≥ 1")));
        }
        Ok(())
    }

    /// `E[β^{± k a_i}]` as a product of `exp(∓ S_N L_{M-1})` factors.
    pub fn integer_moment(&self, i: usize, k: usize, sign: MomentSign) -> Result<f64> {
        self.require_order("integer moments")?;
        self.params.check_scale_index(i)?;
        let ai = self.params.a()[i];
        let mut log = 0.0;
        match sign {
            MomentSign::Positive => {
                for l in 0..k {
                    log -= self.s_log_gamma_reduced(Complex64::new(l as f64 * ai, 0.0), i)?.value.re;
                }
            }
            MomentSign::Negative => {
                let ka = k as f64 * ai;
                if ka >= self.params.b0() {
                    return Err(Error::MomentDomain { ka, b0: self.params.b0() });
                }
                for l in 0..k {
                    log += self.s_log_gamma_reduced(Complex64::new(-((l + 1) as f64) * ai, 0.0), i)?.value.re;
                }
            }
        }
        Ok(log.exp())
    }

    fn laplace_terms(&self, i: usize, x: f64) -> Result<(Vec<f64>, f64)> {
        if self.params.mode != Mode::Probabilistic {
            return Err(Error::ModeError("the Laplace transform describes a probability law".into()));
        }
        self.require_order("the Laplace series")?;
        self.params.check_scale_index(i)?;
        if !(x > 0.0) {
            return Err(Error::InvalidParams(format!("Laplace argument must be positive, got {x}")));
        }
        let ai = self.params.a()[i];
        let mut moments = vec![1.0];
        let mut coeff = 1.0; // x^k / k!
        let mut sum = 1.0;
        for k in 0..TERM_BUDGET {
            let next = moments[k] * (-self.s_log_gamma_reduced(Complex64::new(k as f64 * ai, 0.0), i)?.value.re).exp();
            moments.push(next);
            coeff *= x / (k + 1) as f64;
            sum += if k % 2 == 0 { -coeff * next } else { coeff * next };
            let ratio = x / (k + 2) as f64;
            if ratio < 1.0 {
                let bound = next * coeff / (1.0 - ratio);
                if bound <= 1e-17 + 1e-16 * sum.abs() {
                    return Ok((moments, bound));
                }
            }
        }
        Err(Error::NonConvergence(format!(
            "Laplace series at x = {x} did not meet its truncation bound within {TERM_BUDGET} terms"
        )))
    }

    fn laplace_from_moments(moments: &[f64], x: f64) -> (f64, f64) {
        let mut coeff = 1.0;
        let mut sum = 0.0;
        let mut magnitude = 0.0;
        for (k, m) in moments.iter().enumerate() {
            if k > 0 {
                coeff *= x / k as f64;
            }
            let term = coeff * m;
            sum += if k % 2 == 0 { term } else { -term };
            magnitude += term;
        }
        (sum, 4.0 * f64::EPSILON * magnitude)
    }

    /// `E[exp(-x β^{a_i})] = Σ_k (-x)^k / k! E[β^{k a_i}]`, with its error budget.
    pub fn laplace_series_eval(&self, i: usize, x: f64) -> Result<LaplaceValue> {
        let (moments, truncation_bound) = self.laplace_terms(i, x)?;
        let (value, rounding_bound) = Self::laplace_from_moments(&moments, x);
        if rounding_bound > 1e-6 * value.abs() || value <= 0.0 {
            return Err(Error::NonConvergence(format!(
                "Laplace series at x = {x} lost its precision to cancellation (value {value:e}, rounding {rounding_bound:e})"
            )));
        }
        Ok(LaplaceValue {
            value,
            truncation_bound,
            rounding_bound,
            terms: moments.len(),
        })
    }

    pub fn laplace_series(&self, i: usize, x: f64) -> Result<f64> {
        Ok(self.laplace_series_eval(i, x)?.value)
    }

    /// Compares `∫_0^∞ x^{q-1} L(x) dx` with `Γ(q) η(-q a_i)` for `0 < q < b_0 / a_i`.
    ///
    /// `L` decays only like a power of `x`, so the integral is split at `X`:
    /// the head uses the power series under `x = u^{1/q}`, and the tail
    /// `∫_X^∞` uses `L(x) = (2πi)^{-1} ∫ Γ(s) η(-s a_i) x^{-s} ds` on the line
    /// `Re(s) = c` with `q < c < b_0 / a_i`.
    pub fn ramanujan_check(&self, i: usize, q: f64) -> Result<RamanujanCheck> {
        self.params.check_scale_index(i)?;
        let ai = self.params.a()[i];
        let upper = self.params.b0() / ai;
        if !(q > 0.0 && q < upper) {
            return Err(Error::InvalidParams(format!("Ramanujan check needs 0 < q < b_0/a_i = {upper}, got {q}")));
        }
        let rhs = gamma_real(q) * self.eta(Complex64::new(-q * ai, 0.0))?.re;

        let split = 8.0;
        let (moments, _) = self.laplace_terms(i, split)?;
        let tol = Tolerance::new(1e-15, 1e-12, 2000);
        let head = integrate(
            |u: f64| Self::laplace_from_moments(&moments, u.powf(1.0 / q)).0,
            0.0,
            split.powf(q),
            &[],
            tol,
        )?
        .value
            / q;

        let c = 0.5 * (q + upper);
        let log_split = split.ln();
        let mut failure = None;
        let contour = integrate(
            |u: f64| {
                let s = Complex64::new(c, u);
                match self.eta(-s * ai) {
                    Ok(eta) => {
                        let weight = (ln_gamma(s) + (q - s) * log_split).exp() / (s - q);
                        (weight * eta).re
                    }
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            0.0,
            40.0,
            &[1.0, 2.0, 4.0, 8.0, 16.0],
            tol,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        let tail = contour.value / PI;
        let lhs = head + tail;
        Ok(RamanujanCheck {
            q,
            lhs,
            rhs,
            rel_diff: (lhs - rhs).abs() / rhs.abs(),
            head,
            tail,
            split,
        })
    }

    /// `E[β^n]` for `a = (1, ..., 1)` through binomially weighted
    /// `S_N L_{M-i}(0)` and rational `S_N L_0` factors.
    pub fn unit_a_moment(&self, n: usize) -> Result<f64> {
        let m = self.params.m();
        self.require_order("the unit-scale moment formula")?;
        if self.params.a().iter().any(|&x| x != 1.0) {
            return Err(Error::InvalidParams("the unit-scale moment formula needs a = (1, ..., 1)".into()));
        }
        let b = self.params.b();
        let mut log = 0.0;
        for i in 1..m {
            let ones = GammaParams::new(vec![1.0; m - i])?;
            let s = super::s_log_gamma(&ones, b, Complex64::new(0.0, 0.0), &self.quad)?.value.re;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            log += sign * binomial(n, i) * s;
        }
        // nested products over n > i_1 > ... > i_M ≥ 0 visit i_M = j exactly C(n-1-j, M-1) times
        let sign_m = if m % 2 == 0 { 1.0 } else { -1.0 };
        for j in 0..n {
            let weight = binomial(n - 1 - j, m - 1);
            if weight == 0.0 {
                continue;
            }
            let s0: f64 = super::subset_shifts(b)
                .iter()
                .map(|sh| -sh.sign * (j as f64 + sh.offset).ln())
                .sum();
            log += sign_m * weight * s0;
        }
        Ok(log.exp())
    }
}

/// Parameter sets whose Barnes beta laws multiply to `β_{M,N}(a, b)` when
/// `b_j = n a_i`: `β_{M-1,N-1}(â_i; b_0 + k a_i, b̂_j)` for `k = 0..n-1`.
pub fn reduction_factors(params: &BetaParams, i: usize, j: usize) -> Result<Vec<BetaParams>> {
    params.check_scale_index(i)?;
    params.check_shift_index(j)?;
    let ratio = params.b()[j] / params.a()[i];
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() >= 1e-12 * (1.0 + ratio) {
        return Err(Error::NotMultiple { ratio });
    }
    let gamma = params.gamma().without(i);
    (0..n as usize)
        .map(|k| {
            let mut b = params.b().to_vec();
            b.remove(j);
            b[0] += k as f64 * params.a()[i];
            BetaParams::new(gamma.clone(), b, params.mode())
        })
        .collect()
}
