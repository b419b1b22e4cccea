//! Samplers for `β_{M,N}(a, b)` built on the Lévy–Khinchine structure of `-log β`.
//!
//! For `M < N` the jump measure `k(t) dt / t` has finite mass `λ` and `-log β`
//! is compound Poisson. For `M = N` jumps below `ε` are replaced by their mean
//! `δ(ε) = ∫_0^ε k(t) dt`, leaving a compound Poisson part on `(ε, ∞)`.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Open01, Poisson};
use serde::{Deserialize, Serialize};

use crate::beta::{BarnesBeta, BetaParams, Mode};
use crate::error::{Error, Result};
use crate::format::number;
use crate::multigamma::QuadratureSpec;
use crate::quadrature::{integrate_log_scale, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Small-jump cutoff, used only when `M = N`.
    pub epsilon: f64,
    /// Log-spaced nodes of the jump table.
    pub nodes: usize,
    /// Values drawn per RNG stream.
    pub batch_size: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            epsilon: 1e-6,
            nodes: 2048,
            batch_size: 65_536,
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::ConfigError(format!("ε must be positive, got {}", self.epsilon)));
        }
        if self.nodes < 256 {
            return Err(Error::ConfigError(format!("at least 256 table nodes required, got {}", self.nodes)));
        }
        if self.batch_size == 0 {
            return Err(Error::ConfigError("batch size must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMethod {
    CompoundPoisson,
    TruncatedLevy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMeta {
    pub params: BetaParams,
    pub config: SamplerConfig,
    pub method: SampleMethod,
    /// Jump rate of the simulated compound Poisson part.
    pub rate: f64,
    /// Deterministic compensation added to `-log β` (zero for `M < N`).
    pub drift: f64,
    /// `∫_0^ε t k(t) dt` for `M = N`.
    pub truncation_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub meta: SampleMeta,
}

/// Inverse CDF of the normalised jump law `k(t) / (λ t)` on `(t_min, ∞)`.
#[derive(Debug, Clone)]
pub struct JumpTable {
    log_t: Vec<f64>,
    /// Mass of `(t_min, t_i]`.
    lower: Vec<f64>,
    /// Mass of `(t_i, ∞)`.
    upper: Vec<f64>,
    /// `k(t_i)`, the derivative of the masses in `log t`.
    slope: Vec<f64>,
    total: f64,
    /// Exponent of the power law below the first node when `t_min = 0`.
    low_power: Option<f64>,
    tail_rate: f64,
}

impl JumpTable {
    /// Jumps on `(t_min, ∞)`; `t_min = 0` requires `M < N`.
    pub fn build(beta: &BarnesBeta, t_min: f64, nodes: usize) -> Result<Self> {
        let p = beta.params();
        let spread = p.b().iter().chain(p.a()).fold(1.0f64, |acc, x| acc.max(*x));
        let (t_first, low_power) = if t_min > 0.0 {
            (t_min, None)
        } else {
            if p.m() >= p.n() {
                return Err(Error::NotCompoundPoisson);
            }
            (1e-8 / spread, Some((p.n() - p.m()) as f64))
        };
        let t_last = 40.0 / p.b0();
        if t_first >= t_last {
            return Err(Error::ConfigError(format!(
                "ε = {t_min} must lie below the upper table bound {t_last}"
            )));
        }
        let (u0, u1) = (t_first.ln(), t_last.ln());
        let log_t: Vec<f64> = (0..nodes).map(|i| u0 + (u1 - u0) * i as f64 / (nodes - 1) as f64).collect();
        let slope: Vec<f64> = log_t.iter().map(|u| beta.kernel(u.exp())).collect();
        let tol = Tolerance::new(1e-300, 1e-13, 200);
        let mut pieces = Vec::with_capacity(nodes - 1);
        for w in log_t.windows(2) {
            let est = integrate_log_scale(|t| beta.kernel(t) / t, w[0].exp(), w[1].exp(), &[], tol)?;
            pieces.push(est.value);
        }
        let head = match low_power {
            Some(power) => slope[0] / power,
            None => 0.0,
        };
        // beyond the last node k(t) ≈ C e^{-b_0 t}: exponential tail in t with this rate
        let tail_rate = p.b0() + 1.0 / t_last;
        let tail = slope[nodes - 1] / t_last / tail_rate;
        let mut lower = Vec::with_capacity(nodes);
        let mut acc = head;
        lower.push(acc);
        for piece in &pieces {
            acc += piece;
            lower.push(acc);
        }
        let mut upper = vec![0.0; nodes];
        let mut acc = tail;
        upper[nodes - 1] = acc;
        for i in (0..nodes - 1).rev() {
            acc += pieces[i];
            upper[i] = acc;
        }
        let total = lower[nodes - 1] + tail;
        Ok(Self {
            log_t,
            lower,
            upper,
            slope,
            total,
            low_power,
            tail_rate,
        })
    }

    /// Total jump mass `λ` represented by the table.
    pub fn mass(&self) -> f64 {
        self.total
    }

    /// The jump size `t` with `P[T ≤ t] = u`.
    pub fn quantile(&self, u: f64) -> f64 {
        let n = self.log_t.len();
        let target_lower = u * self.total;
        let target_upper = (1.0 - u) * self.total;
        if target_lower < self.lower[0] {
            let power = self.low_power.expect("mass below the first node");
            return self.log_t[0].exp() * (target_lower / self.lower[0]).powf(1.0 / power);
        }
        if target_upper < self.upper[n - 1] {
            let t_last = self.log_t[n - 1].exp();
            return t_last - (target_upper / self.upper[n - 1]).ln() / self.tail_rate;
        }
        // work from whichever end keeps the target away from cancellation
        let use_upper = u > 0.5;
        let (values, target, sign) = if use_upper {
            (&self.upper, target_upper, -1.0)
        } else {
            (&self.lower, target_lower, 1.0)
        };
        // index with values[i] ≤ target ≤ values[i+1] in the direction of increasing mass
        let i = if use_upper {
            let k = values.partition_point(|v| *v > target);
            k.clamp(1, n - 1) - 1
        } else {
            let k = values.partition_point(|v| *v <= target);
            k.clamp(1, n - 1) - 1
        };
        let h = self.log_t[i + 1] - self.log_t[i];
        let (y0, y1) = (values[i], values[i + 1]);
        let (d0, d1) = (sign * self.slope[i] * h, sign * self.slope[i + 1] * h);
        let hermite = |s: f64| {
            let s2 = s * s;
            let s3 = s2 * s;
            y0 * (2.0 * s3 - 3.0 * s2 + 1.0) + d0 * (s3 - 2.0 * s2 + s) + y1 * (-2.0 * s3 + 3.0 * s2) + d1 * (s3 - s2)
        };
        let derivative = |s: f64| {
            let s2 = s * s;
            y0 * (6.0 * s2 - 6.0 * s) + d0 * (3.0 * s2 - 4.0 * s + 1.0) + y1 * (-6.0 * s2 + 6.0 * s) + d1 * (3.0 * s2 - 2.0 * s)
        };
        // safeguarded Newton on the monotone cubic
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut s = if y1 != y0 { ((target - y0) / (y1 - y0)).clamp(0.0, 1.0) } else { 0.5 };
        for _ in 0..60 {
            let f = hermite(s) - target;
            let increasing = !use_upper;
            if (f < 0.0) == increasing {
                lo = s;
            } else {
                hi = s;
            }
            let d = derivative(s);
            let mut next = s - f / d;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - s).abs() < 1e-15 {
                s = next;
                break;
            }
            s = next;
        }
        (self.log_t[i] + s * h).exp()
    }
}

fn kernel_moment(beta: &BarnesBeta, power: i32, epsilon: f64) -> Result<f64> {
    // ∫_0^ε t^power k(t) dt / t with k(t) → c as t → 0
    let lo = epsilon * 1e-12;
    let tol = Tolerance::new(1e-300, 1e-13, 400);
    let est = integrate_log_scale(|t| t.powi(power - 1) * beta.kernel(t), lo, epsilon, &[], tol)?;
    Ok(est.value + beta.kernel(lo) * lo.powi(power) / power as f64)
}

/// `∫_0^ε t k(t) dt`, the second moment of the jumps discarded by the `ε` cutoff.
pub fn truncation_error_report(params: &BetaParams, epsilon: f64, quad: &QuadratureSpec) -> Result<f64> {
    if params.m() != params.n() {
        return Err(Error::InvalidParams("ε-truncation applies only when M = N".into()));
    }
    if !(epsilon > 0.0) {
        return Err(Error::ConfigError(format!("ε must be positive, got {epsilon}")));
    }
    kernel_moment(&BarnesBeta::new(params.clone(), *quad)?, 2, epsilon)
}

/// A sampler with its jump table built once.
#[derive(Debug, Clone)]
pub struct Sampler {
    beta: BarnesBeta,
    table: JumpTable,
    config: SamplerConfig,
    method: SampleMethod,
    drift: f64,
    truncation_error: Option<f64>,
}

impl Sampler {
    pub fn new(params: &BetaParams, config: SamplerConfig, quad: &QuadratureSpec) -> Result<Self> {
        if params.mode() != Mode::Probabilistic {
            return Err(Error::ModeError("sampling needs probabilistic parameters".into()));
        }
        config.validate()?;
        let beta = BarnesBeta::new(params.clone(), *quad)?;
        let (method, t_min) = if params.m() < params.n() {
            (SampleMethod::CompoundPoisson, 0.0)
        } else {
            (SampleMethod::TruncatedLevy, config.epsilon)
        };
        let table = JumpTable::build(&beta, t_min, config.nodes)?;
        let (drift, truncation_error) = match method {
            SampleMethod::CompoundPoisson => (0.0, None),
            SampleMethod::TruncatedLevy => (
                kernel_moment(&beta, 1, config.epsilon)?,
                Some(kernel_moment(&beta, 2, config.epsilon)?),
            ),
        };
        Ok(Self {
            beta,
            table,
            config,
            method,
            drift,
            truncation_error,
        })
    }

    pub fn table(&self) -> &JumpTable {
        &self.table
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    fn draw_stream(&self, stream: u64, count: usize, out: &mut Vec<f64>) -> Result<()> {
        let mut rng = ChaCha20Rng::seed_from_u64(self.config.seed);
        rng.set_stream(stream);
        let poisson = Poisson::new(self.table.mass())
            .map_err(|e| Error::ConfigError(format!("jump rate {}: {e}", self.table.mass())))?;
        for _ in 0..count {
            let jumps = poisson.sample(&mut rng) as u64;
            let mut total = 0.0;
            for _ in 0..jumps {
                let u: f64 = rng.sample(Open01);
                total += self.table.quantile(u);
            }
            let log = total + self.drift;
            out.push(if log == 0.0 { 1.0 } else { (-log).exp() });
        }
        Ok(())
    }

    /// `n` draws; stream `k` of the seed produces values `k·batch..(k+1)·batch`.
    pub fn sample(&self, n: usize) -> Result<SampleBatch> {
        let mut values = Vec::with_capacity(n);
        let mut stream = 0u64;
        while values.len() < n {
            let count = (n - values.len()).min(self.config.batch_size);
            self.draw_stream(stream, count, &mut values)?;
            stream += 1;
        }
        Ok(SampleBatch {
            values,
            meta: SampleMeta {
                params: self.beta.params().clone(),
                config: self.config,
                method: self.method,
                rate: self.table.mass(),
                drift: self.drift,
                truncation_error: self.truncation_error,
            },
        })
    }
}

/// `n` independent draws from `β_{M,N}(a, b)`.
pub fn sample(params: &BetaParams, n: usize, config: SamplerConfig, quad: &QuadratureSpec) -> Result<SampleBatch> {
    Sampler::new(params, config, quad)?.sample(n)
}

/// Sample mean of `β^q` and its standard error.
pub fn empirical_mellin(values: &[f64], q: Complex64) -> (Complex64, f64) {
    let n = values.len();
    if q == Complex64::new(0.0, 0.0) || n == 0 {
        return (Complex64::new(1.0, 0.0), 0.0);
    }
    let powers: Vec<Complex64> = values.iter().map(|&x| (q * x.ln()).exp()).collect();
    let mean = powers.iter().sum::<Complex64>() / n as f64;
    if n < 2 {
        return (mean, f64::INFINITY);
    }
    let var = powers.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

impl SampleBatch {
    pub fn empirical_mellin(&self, q: Complex64) -> (Complex64, f64) {
        empirical_mellin(&self.values, q)
    }

    /// One value per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 20);
        for v in &self.values {
            out.push_str(&number(*v));
            out.push('\n');
        }
        out
    }

    pub fn metadata_json(&self) -> serde_json::Value {
        serde_json::json!({
            "params": self.meta.params,
            "seed": self.meta.config.seed,
            "method": self.meta.method,
            "epsilon": self.meta.config.epsilon,
            "drift": self.meta.drift,
            "rate": self.meta.rate,
            "truncation_error": self.meta.truncation_error,
            "nodes": self.meta.config.nodes,
            "batch_size": self.meta.config.batch_size,
            "count": self.values.len(),
        })
    }

    /// Writes `path` as CSV and `path.json` as the metadata sidecar.
    pub fn export(&self, path: &Path) -> std::io::Result<()> {
        std::fs::File::create(path)?.write_all(self.to_csv().as_bytes())?;
        let mut sidecar = path.as_os_str().to_owned();
        sidecar.push(".json");
        let text = serde_json::to_string_pretty(&self.metadata_json()).expect("serializable metadata");
        std::fs::write(sidecar, text + "\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: Vec<f64>, b: Vec<f64>) -> BetaParams {
        BetaParams::probabilistic(a, b).unwrap()
    }

    #[test]
    fn table_quantiles_are_monotone_and_match_the_cdf() {
        let beta = BarnesBeta::new(params(vec![1.0], vec![1.0, 1.0, 1.0]), QuadratureSpec::default()).unwrap();
        let table = JumpTable::build(&beta, 0.0, 512).unwrap();
        let lambda = beta.levy_mass().unwrap().value.re;
        assert!((table.mass() - lambda).abs() < 1e-10 * lambda);
        let mut last = 0.0;
        for k in 1..200 {
            let u = k as f64 / 200.0;
            let t = table.quantile(u);
            assert!(t > last);
            last = t;
        }
        // P[T ≤ t] recomputed by quadrature
        let t = table.quantile(0.3);
        let tol = Tolerance::new(1e-300, 1e-13, 400);
        let mass = integrate_log_scale(|s| beta.kernel(s) / s, 1e-14, t, &[], tol).unwrap().value;
        assert!((mass / table.mass() - 0.3).abs() < 1e-8);
    }

    #[test]
    fn truncation_report_scales_quadratically() {
        let p = params(vec![1.0], vec![1.0, 1.0]);
        let quad = QuadratureSpec::default();
        let e1 = truncation_error_report(&p, 1e-6, &quad).unwrap();
        assert!((e1 - 5e-13).abs() < 1e-17, "{e1}");
        let e2 = truncation_error_report(&p, 2e-6, &quad).unwrap();
        assert!((e2 / e1 - 4.0).abs() < 1e-4);
    }

    #[test]
    fn deterministic_given_seed() {
        let p = params(vec![1.0], vec![1.0, 2.0]);
        let quad = QuadratureSpec::default();
        let config = SamplerConfig { batch_size: 100, ..SamplerConfig::with_seed(7) };
        let a = sample(&p, 250, config, &quad).unwrap();
        let b = sample(&p, 250, config, &quad).unwrap();
        assert_eq!(a.values, b.values);
        assert!(a.values.iter().all(|v| *v > 0.0 && *v <= 1.0));
        let other = sample(&p, 250, SamplerConfig { seed: 8, ..config }, &quad).unwrap();
        assert_ne!(a.values, other.values);
    }

    #[test]
    fn analytic_mode_is_rejected() {
        let p = BetaParams::analytic(vec![1.0, 1.0], vec![1.0, -0.2, -0.2]).unwrap();
        assert!(matches!(
            sample(&p, 10, SamplerConfig::default(), &QuadratureSpec::default()),
            Err(Error::ModeError(_))
        ));
    }

    #[test]
    fn uniform_mean() {
        let p = params(vec![1.0], vec![1.0, 1.0]);
        let batch = sample(&p, 20_000, SamplerConfig::with_seed(3), &QuadratureSpec::default()).unwrap();
        let (m, se) = batch.empirical_mellin(Complex64::new(1.0, 0.0));
        assert!((m.re - 0.5).abs() < 4.0 * se, "{m} ± {se}");
        assert_eq!(batch.meta.method, SampleMethod::TruncatedLevy);
    }

    #[test]
    fn empirical_mellin_at_zero() {
        assert_eq!(empirical_mellin(&[0.3, 0.9], Complex64::new(0.0, 0.0)), (Complex64::new(1.0, 0.0), 0.0));
    }
}
