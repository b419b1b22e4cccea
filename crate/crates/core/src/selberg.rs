//! Selberg's integral, the Mellin transform of `M_(μ,λ1,λ2)` and its
//! factorization into a lognormal, three inverse `β_{2,2}` and a Fréchet-type
//! factor.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::beta::{BarnesBeta, BetaParams, Mode};
use crate::error::{Error, Result};
use crate::euler::{ln_beta, ln_gamma, ln_gamma_real};
use crate::multigamma::{log_gamma_m, GammaParams, QuadratureSpec};
use crate::quadrature::{tanh_sinh, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelbergParams {
    pub mu: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// Dimension of the integral; `None` when only the Mellin transform is needed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
}

impl SelbergParams {
    pub fn new(mu: f64, lambda1: f64, lambda2: f64, l: Option<u32>) -> Result<Self> {
        let p = Self { mu, lambda1, lambda2, l };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu < 2.0) {
            return Err(Error::ParamDomain(format!("μ must lie in (0, 2), got {}", self.mu)));
        }
        for (name, x) in [("λ1", self.lambda1), ("λ2", self.lambda2)] {
            if !(x.is_finite() && x > -self.mu / 2.0) {
                return Err(Error::ParamDomain(format!("{name} must exceed -μ/2 = {}, got {x}", -self.mu / 2.0)));
            }
        }
        if let Some(l) = self.l {
            if l == 0 || l as f64 >= self.tau() {
                return Err(Error::ParamDomain(format!("l must satisfy 1 ≤ l < 2/μ = {}, got {l}", self.tau())));
            }
        }
        Ok(())
    }

    pub fn tau(&self) -> f64 {
        2.0 / self.mu
    }

    pub fn with_l(&self, l: u32) -> Result<Self> {
        Self::new(self.mu, self.lambda1, self.lambda2, Some(l))
    }

    fn dimension(&self) -> Result<u32> {
        self.validate()?;
        self.l.ok_or_else(|| Error::ParamDomain("the dimension l is required".into()))
    }
}

fn ln_selberg_product(p: &SelbergParams, l: u32) -> f64 {
    let (mu, l1, l2) = (p.mu, p.lambda1, p.lambda2);
    (0..l)
        .map(|k| {
            let k = k as f64;
            ln_gamma_real(1.0 - (k + 1.0) * mu / 2.0) - ln_gamma_real(1.0 - mu / 2.0) + ln_gamma_real(1.0 + l1 - k * mu / 2.0)
                + ln_gamma_real(1.0 + l2 - k * mu / 2.0)
                - ln_gamma_real(2.0 + l1 + l2 - (l as f64 + k - 1.0) * mu / 2.0)
        })
        .sum()
}

/// Selberg's closed form for `S_{μ,l}[s^{λ1}(1-s)^{λ2}]`.
pub fn selberg_product(p: &SelbergParams) -> Result<f64> {
    let l = p.dimension()?;
    Ok(ln_selberg_product(p, l).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
    /// Set when the relative standard error exceeds 10%.
    pub variance_warning: bool,
}

/// The Selberg average by importance sampling with `Beta(1+λ1, 1+λ2)`
/// proposals; `l = 1` is done by tanh-sinh quadrature.
pub fn selberg_average_mc(p: &SelbergParams, n: usize, seed: u64) -> Result<McEstimate> {
    let l = p.dimension()?;
    if l > 4 {
        return Err(Error::ParamDomain(format!("Monte Carlo supports l ≤ 4, got {l}")));
    }
    let (l1, l2) = (p.lambda1, p.lambda2);
    if l == 1 {
        let est = tanh_sinh(
            |_, s, one_minus| s.powf(l1) * one_minus.powf(l2),
            0.0,
            1.0,
            Tolerance::new(1e-14, 1e-13, 12),
        )?;
        return Ok(McEstimate {
            estimate: est.value,
            std_error: est.error,
            samples: est.evaluations,
            variance_warning: false,
        });
    }
    if n < 2 {
        return Err(Error::ParamDomain(format!("at least two samples are needed, got {n}")));
    }
    let proposal = Beta::new(1.0 + l1, 1.0 + l2).map_err(|e| Error::ParamDomain(e.to_string()))?;
    let norm = (l as f64 * ln_beta(1.0 + l1, 1.0 + l2)).exp();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(0);
    let mut s = [0.0f64; 4];
    // Welford running moments of the weights
    let (mut mean, mut m2) = (0.0f64, 0.0f64);
    for count in 1..=n {
        for x in s.iter_mut().take(l as usize) {
            *x = proposal.sample(&mut rng);
        }
        let mut log_w = 0.0;
        for i in 0..l as usize {
            for j in i + 1..l as usize {
                log_w -= p.mu * (s[i] - s[j]).abs().ln();
            }
        }
        let w = log_w.exp();
        let delta = w - mean;
        mean += delta / count as f64;
        m2 += delta * (w - mean);
    }
    let estimate = norm * mean;
    let std_error = norm * (m2 / (n - 1) as f64 / n as f64).sqrt();
    Ok(McEstimate {
        estimate,
        std_error,
        samples: n,
        variance_warning: std_error > 0.1 * estimate.abs(),
    })
}

fn double_gamma(tau: f64) -> GammaParams {
    GammaParams::new(vec![1.0, tau]).expect("τ > 1 is a valid scale")
}

/// `E[M^q]` for `M_(μ,λ1,λ2)`, defined for `Re(q) < τ`.
pub fn mellin_m(p: &SelbergParams, q: Complex64, quad: &QuadratureSpec) -> Result<Complex64> {
    p.validate()?;
    let tau = p.tau();
    if q.re >= tau {
        return Err(Error::MellinDomain { q, tau });
    }
    if q == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let g2 = double_gamma(tau);
    let lg = |w: Complex64| log_gamma_m(&g2, w, quad);
    let c = |x: f64| Complex64::new(x, 0.0);
    let (l1, l2) = (p.lambda1, p.lambda2);
    let a1 = 1.0 + tau * (1.0 + l1);
    let a2 = 1.0 + tau * (1.0 + l2);
    let a4 = 2.0 + tau * (2.0 + l1 + l2);
    let log = q * (tau.ln() / tau + (2.0 * PI).ln() - ln_gamma_real(1.0 - 1.0 / tau))
        + lg(a1 - q)? - lg(c(a1))?
        + lg(a2 - q)? - lg(c(a2))?
        + lg(tau - q)? - lg(c(tau))?
        + lg(a4 - q)? - lg(a4 - 2.0 * q)?;
    Ok(log.exp())
}

/// Factors of `M_(μ,λ1,λ2)` in law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MFactorSet {
    pub constant: f64,
    /// Variance of the zero-mean normal `log L`.
    pub lognormal_variance: f64,
    /// `X_i` is distributed as `1 / β_{2,2}(τ; b)` with these parameters.
    pub x: [BetaParams; 3],
    /// `Y` has density `τ y^{-1-τ} exp(-y^{-τ})`.
    pub frechet_tau: f64,
}

impl MFactorSet {
    pub fn new(p: &SelbergParams) -> Result<Self> {
        p.validate()?;
        let tau = p.tau();
        let (l1, l2) = (p.lambda1, p.lambda2);
        let constant = 2.0 * PI * (-LN_2 * (3.0 * (1.0 + tau) + 2.0 * tau * (l1 + l2)) / tau).exp()
            / crate::euler::gamma_real(1.0 - 1.0 / tau);
        let a = vec![1.0, tau];
        let half = tau * (l2 - l1) / 2.0;
        let x1 = if half > 0.0 {
            BetaParams::probabilistic(a.clone(), vec![1.0 + tau + tau * l1, half, half])?
        } else {
            BetaParams::analytic(a.clone(), vec![1.0 + tau + tau * l1, half, half])?
        };
        let x2 = BetaParams::probabilistic(a.clone(), vec![1.0 + tau + tau * (l1 + l2) / 2.0, 0.5, tau / 2.0])?;
        let s = (1.0 + tau + tau * l1 + tau * l2) / 2.0;
        let x3 = BetaParams::probabilistic(a, vec![1.0 + tau, s, s])?;
        Ok(Self {
            constant,
            lognormal_variance: 4.0 * LN_2 / tau,
            x: [x1, x2, x3],
            frechet_tau: tau,
        })
    }
}

/// The product of the factor Mellin transforms, `const^q E[L^q] ∏ E[X_i^q] E[Y^q]`.
pub fn factor_mellin_product(p: &SelbergParams, q: Complex64, quad: &QuadratureSpec) -> Result<Complex64> {
    let factors = MFactorSet::new(p)?;
    let tau = factors.frechet_tau;
    if q.re >= tau {
        return Err(Error::MellinDomain { q, tau });
    }
    let mut log = q * factors.constant.ln() + q * q * factors.lognormal_variance / 2.0 + ln_gamma(1.0 - q / tau);
    for x in &factors.x {
        log += BarnesBeta::new(x.clone(), *quad)?.log_eta(-q)?.value;
    }
    Ok(log.exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MellinCheck {
    pub q: Complex64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub rel_err: f64,
}

impl MellinCheck {
    fn new(q: Complex64, lhs: Complex64, rhs: Complex64) -> Self {
        Self {
            q,
            lhs,
            rhs,
            rel_err: (lhs - rhs).norm() / rhs.norm(),
        }
    }
}

/// `mellin_m(q)` against `factor_mellin_product(q)`.
pub fn decomposition_check(p: &SelbergParams, q: Complex64, quad: &QuadratureSpec) -> Result<MellinCheck> {
    Ok(MellinCheck::new(q, factor_mellin_product(p, q, quad)?, mellin_m(p, q, quad)?))
}

/// `mellin_m(l)` against `selberg_product` for every integer `1 ≤ l < τ`.
pub fn moment_checks(p: &SelbergParams, quad: &QuadratureSpec) -> Result<Vec<MellinCheck>> {
    let mut out = Vec::new();
    let mut l = 1u32;
    while (l as f64) < p.tau() {
        let q = Complex64::new(l as f64, 0.0);
        let product = selberg_product(&p.with_l(l)?)?;
        out.push(MellinCheck::new(q, mellin_m(p, q, quad)?, Complex64::new(product, 0.0)));
        l += 1;
    }
    Ok(out)
}

/// A real grid of `count` points in `(-min b_0 · 0.9, min(τ, 1) · 0.9)`, zero excluded.
pub fn decomposition_grid(p: &SelbergParams, count: usize) -> Result<Vec<Complex64>> {
    let factors = MFactorSet::new(p)?;
    let lo = -0.9 * factors.x.iter().map(|x| x.b0()).fold(f64::INFINITY, f64::min).min(1.0);
    let hi = 0.9 * p.tau().min(1.0);
    Ok((0..count)
        .map(|k| lo + (hi - lo) * (k as f64 + 0.5) / count as f64)
        .map(|x| Complex64::new(if x.abs() < 1e-3 { 1e-3 } else { x }, 0.0))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeFlag {
    pub factor: String,
    pub mode: Mode,
    pub params: BetaParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub params: SelbergParams,
    /// `β_{1,1}(a_1 = 1; b_0 = 1 + λ1, b_1 = 1 + λ2)`, whose density is proportional to the integrand.
    pub integrand_law: BetaParams,
    pub integrand_is_uniform: bool,
    pub constant: f64,
    pub lognormal_variance: f64,
    pub frechet_tau: f64,
    pub mode_flags: Vec<ModeFlag>,
    pub moment_checks: Vec<MellinCheck>,
    pub moment_identity_holds: bool,
}

/// Summary of the chain `β_{1,1} → S_{μ,l} → const · L X_1 X_2 X_3 Y`.
pub fn interpret_chain_report(p: &SelbergParams, quad: &QuadratureSpec) -> Result<ChainReport> {
    let factors = MFactorSet::new(p)?;
    let integrand_law = BetaParams::probabilistic(vec![1.0], vec![1.0 + p.lambda1, 1.0 + p.lambda2])?;
    let checks = moment_checks(p, quad)?;
    let holds = checks.iter().all(|c| c.rel_err < 1e-6);
    let mode_flags = factors
        .x
        .iter()
        .enumerate()
        .map(|(i, x)| ModeFlag {
            factor: format!("X{}", i + 1),
            mode: x.mode(),
            params: x.clone(),
        })
        .collect();
    Ok(ChainReport {
        params: *p,
        integrand_is_uniform: p.lambda1 == 0.0 && p.lambda2 == 0.0,
        integrand_law,
        constant: factors.constant,
        lognormal_variance: factors.lognormal_variance,
        frechet_tau: factors.frechet_tau,
        mode_flags,
        moment_checks: checks,
        moment_identity_holds: holds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelbergReport {
    pub params: SelbergParams,
    pub product_value: Option<f64>,
    pub mc_estimate: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub variance_warning: bool,
    pub mellin_checks: Vec<MellinCheck>,
    pub mode_flags: Vec<ModeFlag>,
}

/// Product value, Monte Carlo estimate (when `l` is set and `mc_samples > 0`)
/// and the moment and decomposition checks.
pub fn selberg_report(p: &SelbergParams, mc_samples: usize, seed: u64, qs: &[Complex64], quad: &QuadratureSpec) -> Result<SelbergReport> {
    let chain = interpret_chain_report(p, quad)?;
    let product_value = p.l.map(|_| selberg_product(p)).transpose()?;
    let mc = match p.l {
        Some(_) if mc_samples > 0 => Some(selberg_average_mc(p, mc_samples, seed)?),
        _ => None,
    };
    let mut mellin_checks = chain.moment_checks;
    for q in qs {
        mellin_checks.push(decomposition_check(p, *q, quad)?);
    }
    Ok(SelbergReport {
        params: *p,
        product_value,
        mc_estimate: mc.map(|m| m.estimate),
        mc_stderr: mc.map(|m| m.std_error),
        variance_warning: mc.is_some_and(|m| m.variance_warning),
        mellin_checks,
        mode_flags: chain.mode_flags,
    })
}
