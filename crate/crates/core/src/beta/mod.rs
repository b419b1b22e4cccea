//! Barnes beta distributions `β_{M,N}(a, b)`.
//!
//! The Mellin transform is `η_{M,N}(q) = exp(S_N L_M(q) - S_N L_M(0))` where
//! `S_N` is the alternating sum over the `2^N` subset-shifted arguments
//! `q + b_0 + b_{k_1} + ... + b_{k_p}`. For `M ≤ N` it is also the exponential of
//! the Lévy–Khinchine integral `∫ (e^{-qt} - 1) k(t) dt / t` with
//! `k(t) = e^{-b_0 t} ∏_j (1 - e^{-b_j t}) f(t) / t^M`.
//!
//! Indices: `i` selects a scale `a_i` and is zero-based into `a`; `j` selects a
//! shift `b_j` and indexes `b` directly, so `1 ≤ j ≤ N`.

mod moments;
mod shintani;

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigamma::{bernoulli_poly, log_gamma_m_eval, GammaParams, QuadratureSpec, Valued};
use crate::quadrature::{integrate_log_scale, Tolerance};

pub use moments::{reduction_factors, LaplaceValue, MomentSign, RamanujanCheck};
pub use shintani::ShintaniVariant;

/// Largest supported `N`; `S_N` has `2^N` terms.
pub const MAX_N: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Probabilistic,
    Analytic,
}

/// `(M, a)`, the shifts `b = (b_0, ..., b_N)` and the evaluation mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaParams {
    gamma: GammaParams,
    b: Vec<f64>,
    mode: Mode,
}

impl BetaParams {
    pub fn new(gamma: GammaParams, b: Vec<f64>, mode: Mode) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::InvalidParams("b must contain at least b_0".into()));
        }
        if b.len() - 1 > MAX_N {
            return Err(Error::InvalidParams(format!("N = {} exceeds the limit {MAX_N}", b.len() - 1)));
        }
        if b.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("b must be finite".into()));
        }
        if !(b[0] > 0.0) {
            return Err(Error::InvalidParams(format!("b_0 must be positive, got {}", b[0])));
        }
        match mode {
            Mode::Probabilistic => {
                if let Some(bad) = b[1..].iter().find(|x| !(**x > 0.0)) {
                    return Err(Error::InvalidParams(format!(
                        "probabilistic mode needs b_j > 0, got {bad}"
                    )));
                }
                if gamma.order() > b.len() - 1 {
                    return Err(Error::InvalidParams(format!(
                        "probabilistic mode needs M ≤ N, got M = {}, N = {}",
                        gamma.order(),
                        b.len() - 1
                    )));
                }
            }
            Mode::Analytic => {
                let min = min_subset_sum(&b);
                if !(min > 0.0) {
                    return Err(Error::InvalidParams(format!(
                        "every subset sum b_0 + Σ b_k must be positive, minimum is {min}"
                    )));
                }
            }
        }
        Ok(Self { gamma, b, mode })
    }

    pub fn probabilistic(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        Self::new(GammaParams::new(a)?, b, Mode::Probabilistic)
    }

    pub fn analytic(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        Self::new(GammaParams::new(a)?, b, Mode::Analytic)
    }

    pub fn gamma(&self) -> &GammaParams {
        &self.gamma
    }

    pub fn a(&self) -> &[f64] {
        self.gamma.scales()
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn b0(&self) -> f64 {
        self.b[0]
    }

    pub fn m(&self) -> usize {
        self.gamma.order()
    }

    pub fn n(&self) -> usize {
        self.b.len() - 1
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Smallest `b_0 + Σ_{k∈K} b_k` over subsets `K`; equals `b_0` in probabilistic mode.
    pub fn min_subset_sum(&self) -> f64 {
        min_subset_sum(&self.b)
    }

    fn derived(&self, gamma: GammaParams, b: Vec<f64>) -> Result<BetaParams> {
        // identities leave the probabilistic range (M > N), so derived sets are analytic
        BetaParams::new(gamma, b, Mode::Analytic)
    }

    fn check_scale_index(&self, i: usize) -> Result<()> {
        if i >= self.m() {
            return Err(Error::InvalidParams(format!("scale index {i} out of range for M = {}", self.m())));
        }
        Ok(())
    }

    fn check_shift_index(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n() {
            return Err(Error::InvalidParams(format!("shift index {j} must lie in 1..={}", self.n())));
        }
        Ok(())
    }

    /// `(â_i, b)`.
    pub fn without_scale(&self, i: usize) -> Result<BetaParams> {
        self.check_scale_index(i)?;
        self.derived(self.gamma.without(i), self.b.clone())
    }

    /// `(a, b̂_j)`.
    pub fn without_shift(&self, j: usize) -> Result<BetaParams> {
        self.check_shift_index(j)?;
        let mut b = self.b.clone();
        b.remove(j);
        self.derived(self.gamma.clone(), b)
    }

    /// `b_j ↦ b_j + x` (`j = 0` shifts `b_0`).
    pub fn with_shift_added(&self, j: usize, x: f64) -> Result<BetaParams> {
        if j > self.n() {
            return Err(Error::InvalidParams(format!("shift index {j} out of range")));
        }
        let mut b = self.b.clone();
        b[j] += x;
        BetaParams::new(self.gamma.clone(), b, self.mode).or_else(|_| {
            let mut b = self.b.clone();
            b[j] += x;
            self.derived(self.gamma.clone(), b)
        })
    }
}

fn min_subset_sum(b: &[f64]) -> f64 {
    b[0] + b[1..].iter().filter(|x| **x < 0.0).sum::<f64>()
}

/// One term of `S_N`: sign `(-1)^p`, offset `b_0 + Σ b_k` and the subset.
#[derive(Debug, Clone, PartialEq)]
pub struct Shift {
    pub sign: f64,
    pub offset: f64,
    pub members: Vec<usize>,
}

/// All `2^N` subset shifts, ordered by size and then lexicographically.
pub fn subset_shifts(b: &[f64]) -> Vec<Shift> {
    let n = b.len().saturating_sub(1);
    let mut out = Vec::with_capacity(1 << n);
    for p in 0..=n {
        let mut combo: Vec<usize> = (1..=p).collect();
        loop {
            let offset = b[0] + combo.iter().map(|&k| b[k]).sum::<f64>();
            out.push(Shift {
                sign: if p % 2 == 0 { 1.0 } else { -1.0 },
                offset,
                members: combo.clone(),
            });
            // next p-combination of 1..=n in lexicographic order
            let mut pos = p;
            while pos > 0 && combo[pos - 1] == n - p + pos {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            combo[pos - 1] += 1;
            for r in pos..p {
                combo[r] = combo[r - 1] + 1;
            }
        }
    }
    out
}

/// `(S_N h)(q | b) = Σ_p (-1)^p Σ_{k_1<...<k_p} h(q + b_0 + b_{k_1} + ... + b_{k_p})`.
///
/// Failures are wrapped with the offending subset.
pub fn s_operator<F>(mut h: F, q: Complex64, b: &[f64]) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mut total = Complex64::new(0.0, 0.0);
    for shift in subset_shifts(b) {
        let arg = q + shift.offset;
        let value = h(arg).map_err(|e| e.in_subset(&shift.members, arg))?;
        total += value * shift.sign;
    }
    Ok(total)
}

fn s_log_gamma_with(gamma: &GammaParams, shifts: &[Shift], q: Complex64, quad: &QuadratureSpec) -> Result<Valued> {
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for shift in shifts {
        let arg = q + shift.offset;
        let v = log_gamma_m_eval(gamma, arg, quad).map_err(|e| e.in_subset(&shift.members, arg))?;
        value += v.value * shift.sign;
        error += v.error;
    }
    Ok(Valued { value, error })
}

/// `(S_N L_M)(q | b)` for arbitrary gamma parameters, with an error estimate.
pub fn s_log_gamma(gamma: &GammaParams, b: &[f64], q: Complex64, quad: &QuadratureSpec) -> Result<Valued> {
    s_log_gamma_with(gamma, &subset_shifts(b), q, quad)
}

/// `(S_N B_n)(q | b)` together with `Σ |B_n(q + offset)|`, the scale against
/// which cancellation is judged.
pub fn s_bernoulli(gamma: &GammaParams, b: &[f64], n: usize, q: Complex64, quad: &QuadratureSpec) -> Result<(Complex64, f64)> {
    let mut scale = 0.0;
    let value = s_operator(
        |x| {
            let v = bernoulli_poly(gamma, n, x, quad)?;
            scale += v.norm();
            Ok(v)
        },
        q,
        b,
    )?;
    Ok((value, scale))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EtaMethod {
    DirectSn,
    LevyIntegral,
    ShintaniK,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaValue {
    pub value: Complex64,
    pub method: EtaMethod,
    pub est_error: f64,
}

/// Behaviour of `η(q)` as `q → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticProfile {
    /// `M < N`: `η(q) → constant = P[β = 1]`.
    Constant(f64),
    /// `M = N`: `log η(q) = log_slope · log q + O(1)`.
    LogSlope(f64),
}

/// The Lévy measure `k(t) dt / t` of `-log β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevySpec {
    pub params: BetaParams,
    /// `λ = ∫ k(t) dt / t`; `None` when infinite (`M = N`).
    pub total_mass: Option<f64>,
    /// `k(t) ~ c t^{N-M}` as `t → 0`.
    pub small_t_exponent: usize,
    /// The constant `c = b_1...b_N f(0)`.
    pub small_t_constant: f64,
}

/// `e^z - 1` without cancellation for small `|z|`.
pub(crate) fn expm1_c(z: Complex64) -> Complex64 {
    if z.norm() < 0.1 {
        let mut term = z;
        let mut sum = z;
        for k in 2..16 {
            term *= z / k as f64;
            sum += term;
        }
        sum
    } else {
        z.exp() - 1.0
    }
}

/// Evaluator for one parameter set; caches the shifts and `S_N L_M(0)`.
#[derive(Debug)]
pub struct BarnesBeta {
    params: BetaParams,
    quad: QuadratureSpec,
    shifts: Vec<Shift>,
    s_zero: OnceLock<Valued>,
}

impl Clone for BarnesBeta {
    fn clone(&self) -> Self {
        Self {
            params: self.params.clone(),
            quad: self.quad,
            shifts: self.shifts.clone(),
            s_zero: self.s_zero.clone(),
        }
    }
}

impl BarnesBeta {
    pub fn new(params: BetaParams, quad: QuadratureSpec) -> Result<Self> {
        quad.validate()?;
        let shifts = subset_shifts(&params.b);
        Ok(Self {
            params,
            quad,
            shifts,
            s_zero: OnceLock::new(),
        })
    }

    pub fn params(&self) -> &BetaParams {
        &self.params
    }

    pub fn quad(&self) -> &QuadratureSpec {
        &self.quad
    }

    fn sibling(&self, params: BetaParams) -> Result<BarnesBeta> {
        BarnesBeta::new(params, self.quad)
    }

    /// `(S_N L_M)(q | b)`.
    pub fn s_log_gamma(&self, q: Complex64) -> Result<Valued> {
        s_log_gamma_with(&self.params.gamma, &self.shifts, q, &self.quad)
    }

    /// `(S_N L_M)(0 | b)`, cached.
    pub fn s_zero(&self) -> Result<Valued> {
        if let Some(v) = self.s_zero.get() {
            return Ok(*v);
        }
        let v = self.s_log_gamma(Complex64::new(0.0, 0.0))?;
        Ok(*self.s_zero.get_or_init(|| v))
    }

    /// `(S_N L_{M-1})(q | â_i, b)`.
    pub fn s_log_gamma_reduced(&self, q: Complex64, i: usize) -> Result<Valued> {
        self.params.check_scale_index(i)?;
        s_log_gamma_with(&self.params.gamma.without(i), &self.shifts, q, &self.quad)
    }

    /// `log η(q)` from the direct `S_N` definition.
    pub fn log_eta(&self, q: Complex64) -> Result<Valued> {
        if q == Complex64::new(0.0, 0.0) {
            return Ok(Valued { value: q, error: 0.0 });
        }
        let at_q = self.s_log_gamma(q)?;
        let at_zero = self.s_zero()?;
        Ok(Valued {
            value: at_q.value - at_zero.value,
            error: at_q.error + at_zero.error,
        })
    }

    /// `η_{M,N}(q | a, b)` by the requested method.
    pub fn mellin_eta(&self, q: Complex64, method: EtaMethod) -> Result<EtaValue> {
        if q == Complex64::new(0.0, 0.0) {
            return Ok(EtaValue {
                value: Complex64::new(1.0, 0.0),
                method,
                est_error: 0.0,
            });
        }
        let log = match method {
            EtaMethod::DirectSn => self.log_eta(q)?,
            EtaMethod::LevyIntegral => self.levy_exponent_eval(q)?,
            EtaMethod::ShintaniK => {
                if self.params.m() == 0 {
                    return Err(Error::MethodDomain("Shintani factorization needs M ≥ 1".into()));
                }
                return self.shintani_product(q, ShintaniVariant::Shifted, 0, None);
            }
        };
        let value = log.value.exp();
        Ok(EtaValue {
            value,
            method,
            est_error: value.norm() * log.error,
        })
    }

    /// `η(q)` by the direct definition.
    pub fn eta(&self, q: Complex64) -> Result<Complex64> {
        Ok(self.mellin_eta(q, EtaMethod::DirectSn)?.value)
    }

    // -----------------------------------------------------------------------
    // Lévy–Khinchine representation

    /// The Lévy density `k(t) = e^{-b_0 t} ∏ (1 - e^{-b_j t}) f(t) / t^M`.
    pub fn kernel(&self, t: f64) -> f64 {
        let b = &self.params.b;
        let product: f64 = b[1..].iter().map(|&bj| -(-bj * t).exp_m1()).product();
        (-b[0] * t).exp() * product * self.params.gamma.f_over_power(t)
    }

    /// `b_1 ... b_N f(0)`, the limit of `k(t) / t^{N-M}` at `t = 0`.
    pub fn small_t_constant(&self) -> f64 {
        self.params.b[1..].iter().product::<f64>() * self.params.gamma.f_at_zero()
    }

    fn levy_tolerance(&self) -> Tolerance {
        let t = self.quad.tolerance();
        Tolerance::new(t.abs, t.rel, t.max_subdivisions.max(2000))
    }

    /// `∫_0^∞ φ(t) k(t) dt / t` where `φ(t) k(t) ~ C t^{power}` near `0` and
    /// `|φ(t) k(t)|` decays at least like `e^{-decay t}`.
    fn kernel_integral(&self, phi: impl Fn(f64) -> Complex64, power: f64, decay: f64, scales: &[f64]) -> Result<Valued> {
        let spread = scales.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
        let t_lo = 1e-9 / spread;
        let t_hi = (46.0 + spread.ln().max(0.0)) / decay;
        let mut breaks = vec![1e-6 / spread, 1e-3 / spread, 1.0 / spread, 1.0 / decay];
        breaks.extend(scales.iter().filter(|x| **x > 0.0).map(|x| 1.0 / x));
        let est = integrate_log_scale(
            |t| phi(t) * (self.kernel(t) / t),
            t_lo,
            t_hi,
            &breaks,
            self.levy_tolerance(),
        )?;
        // ∫_0^{t_lo} C t^{power - 1} dt = (value at t_lo) t_lo^{0} / power
        let head = phi(t_lo) * self.kernel(t_lo) / power;
        let tail = (phi(t_hi) * self.kernel(t_hi)).norm() / (decay * t_hi);
        Ok(Valued {
            value: est.value + head,
            error: est.error + tail + head.norm() * t_lo * spread,
        })
    }

    fn levy_domain(&self, q: Complex64) -> Result<()> {
        let p = &self.params;
        if p.m() > p.n() {
            return Err(Error::MethodDomain(format!(
                "the Lévy representation needs M ≤ N, got M = {}, N = {}",
                p.m(),
                p.n()
            )));
        }
        let bound = p.min_subset_sum();
        if q.re <= -bound {
            return Err(Error::MethodDomain(format!("the Lévy integral needs Re(q) > {}, got q = {q}", -bound)));
        }
        Ok(())
    }

    fn levy_scales(&self, q: Complex64) -> Vec<f64> {
        let mut scales: Vec<f64> = self.params.b.iter().map(|x| x.abs()).collect();
        scales.extend_from_slice(self.params.a());
        scales.push(q.norm());
        scales
    }

    /// `∫_0^∞ (e^{-qt} - 1) k(t) dt / t`, with an error estimate.
    pub fn levy_exponent_eval(&self, q: Complex64) -> Result<Valued> {
        self.levy_domain(q)?;
        if q == Complex64::new(0.0, 0.0) {
            return Ok(Valued { value: q, error: 0.0 });
        }
        let power = (self.params.n() - self.params.m()) as f64 + 1.0;
        let decay = self.params.min_subset_sum() + q.re.min(0.0);
        self.kernel_integral(|t| expm1_c(-q * t), power, decay, &self.levy_scales(q))
    }

    /// `log η(q)` through the Lévy–Khinchine integral.
    pub fn levy_exponent(&self, q: Complex64) -> Result<Complex64> {
        Ok(self.levy_exponent_eval(q)?.value)
    }

    fn require_probabilistic(&self, what: &str) -> Result<()> {
        if self.params.mode != Mode::Probabilistic {
            return Err(Error::ModeError(what.into()));
        }
        Ok(())
    }

    /// `λ = ∫ k(t) dt / t`, finite only for `M < N`.
    pub fn levy_mass(&self) -> Result<Valued> {
        let p = &self.params;
        if p.m() >= p.n() {
            return Err(Error::NotCompoundPoisson);
        }
        let power = (p.n() - p.m()) as f64;
        let mass = self.kernel_integral(|_| Complex64::new(1.0, 0.0), power, p.min_subset_sum(), &self.levy_scales(Complex64::new(0.0, 0.0)))?;
        Ok(mass)
    }

    pub fn levy_spec(&self) -> Result<LevySpec> {
        let p = &self.params;
        if p.m() > p.n() {
            return Err(Error::MethodDomain("the Lévy measure exists only for M ≤ N".into()));
        }
        let total_mass = if p.m() < p.n() { Some(self.levy_mass()?.value.re) } else { None };
        Ok(LevySpec {
            params: p.clone(),
            total_mass,
            small_t_exponent: p.n() - p.m(),
            small_t_constant: self.small_t_constant(),
        })
    }

    /// `P[β = 1] = exp(-λ)` for `M < N`.
    pub fn atom_probability(&self) -> Result<f64> {
        self.require_probabilistic("the atom at 1 is a probabilistic statement")?;
        Ok((-self.levy_mass()?.value.re).exp())
    }

    pub fn asymptotic_profile(&self) -> Result<AsymptoticProfile> {
        self.require_probabilistic("the asymptotic profile describes a probability law")?;
        let p = &self.params;
        if p.m() < p.n() {
            Ok(AsymptoticProfile::Constant((-self.s_zero()?.value.re).exp()))
        } else {
            Ok(AsymptoticProfile::LogSlope(-self.small_t_constant()))
        }
    }

    /// `(S_N L_M)(0 | b)`, which must be positive when `M < N`.
    pub fn positivity_check(&self) -> Result<f64> {
        self.require_probabilistic("positivity is a probabilistic statement")?;
        let p = &self.params;
        if p.m() >= p.n() {
            return Err(Error::InvalidParams("positivity holds for M < N only".into()));
        }
        let s = self.s_zero()?;
        if s.value.re <= s.error {
            return Err(Error::AssertionFailure(format!(
                "S_N L_M(0) = {} is not positive (error {:e})",
                s.value.re, s.error
            )));
        }
        Ok(s.value.re)
    }

    // -----------------------------------------------------------------------
    // Functional equation and symmetries

    /// `η(q) exp(-S_N L_{M-1}(q | â_i, b))`, which equals `η(q + a_i)`.
    pub fn functional_equation_rhs(&self, q: Complex64, i: usize) -> Result<Complex64> {
        let reduced = self.s_log_gamma_reduced(q, i)?;
        Ok((self.log_eta(q)?.value - reduced.value).exp())
    }

    /// Residuals of the five symmetry identities at `(q, x, i, j)`:
    /// the `b_0`-shift identity, the `N`-reduction, the functional-equation
    /// variant, the `b_j + a_i` identity and the mixed identity.
    ///
    /// Each residual is `|lhs - rhs| / max(1, |rhs|)`.
    pub fn symmetry_residuals(&self, q: Complex64, x: f64, i: usize, j: usize) -> Result<[f64; 5]> {
        let p = &self.params;
        p.check_scale_index(i)?;
        p.check_shift_index(j)?;
        let ai = p.a()[i];
        let bj = p.b[j];
        let residual = |lhs: Complex64, rhs: Complex64| (lhs - rhs).norm() / rhs.norm().max(1.0);
        let log = |beta: &BarnesBeta, z: Complex64| -> Result<Complex64> { Ok(beta.log_eta(z)?.value) };
        let real = |v: f64| Complex64::new(v, 0.0);

        // η(q | b_0 + x) η(x | b) = η(q + x | b)
        let shifted = self.sibling(p.with_shift_added(0, x)?)?;
        let r1 = residual((log(&shifted, q)? + log(self, real(x))?).exp(), log(self, q + x)?.exp());

        // η_{M,N}(q | b) η_{M,N-1}(q | b_0 + b_j, b̂_j) = η_{M,N-1}(q | b̂_j)
        let hat_j = p.without_shift(j)?;
        let mut moved = hat_j.b.clone();
        moved[0] += bj;
        let moved = self.sibling(p.derived(p.gamma.clone(), moved)?)?;
        let hat_j = self.sibling(hat_j)?;
        let r2 = residual((log(self, q)? + log(&moved, q)?).exp(), log(&hat_j, q)?.exp());

        // η(q + a_i) η_{M-1,N}(q | â_i, b) = η(q) η(a_i)
        let hat_i = self.sibling(p.without_scale(i)?)?;
        let r3 = residual(
            (log(self, q + ai)? + log(&hat_i, q)?).exp(),
            (log(self, q)? + log(self, real(ai))?).exp(),
        );

        // η(q | b_j + a_i) η_{M-1,N-1}(b_j | â_i, b̂_j) = η(q) η_{M-1,N-1}(q + b_j | â_i, b̂_j)
        let bumped = self.sibling(p.with_shift_added(j, ai)?)?;
        let mut b_hat = p.b.clone();
        b_hat.remove(j);
        let both = self.sibling(p.derived(p.gamma.without(i), b_hat)?)?;
        let r4 = residual(
            (log(&bumped, q)? + log(&both, real(bj))?).exp(),
            (log(self, q)? + log(&both, q + bj)?).exp(),
        );

        // η(q + a_i) η_{M-1,N-1}(q | â_i, b̂_j) = η(q) η_{M-1,N-1}(q + b_j | â_i, b̂_j)
        let r5 = residual(
            (log(self, q + ai)? + log(&both, q)?).exp(),
            (log(self, q)? + log(&both, q + bj)?).exp(),
        );
        Ok([r1, r2, r3, r4, r5])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn beta(a: Vec<f64>, b: Vec<f64>) -> BarnesBeta {
        BarnesBeta::new(BetaParams::probabilistic(a, b).unwrap(), QuadratureSpec::default()).unwrap()
    }

    #[test]
    fn subsets_are_ordered_by_size_then_lexicographically() {
        let shifts = subset_shifts(&[1.0, 10.0, 20.0, 40.0]);
        let members: Vec<Vec<usize>> = shifts.iter().map(|s| s.members.clone()).collect();
        assert_eq!(
            members,
            vec![vec![], vec![1], vec![2], vec![3], vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 2, 3]]
        );
        assert_eq!(shifts[5].offset, 51.0);
        assert_eq!(shifts[7].sign, -1.0);
    }

    #[test]
    fn s_operator_examples() {
        let id = |x: Complex64| Ok(x);
        let got = s_operator(id, c(0.7), &[1.3, 2.0]).unwrap();
        assert!((got.re + 2.0).abs() < 1e-15);
        let got = s_operator(id, c(0.7), &[1.3, 2.0, 0.4]).unwrap();
        assert!(got.norm() < 1e-15);
        let got = s_operator(|x| Ok(x * x), c(0.7), &[1.3, 2.0, 0.4]).unwrap();
        assert!((got.re - 2.0 * 2.0 * 0.4).abs() < 1e-14);
    }

    #[test]
    fn s_operator_reports_subset() {
        let err = s_operator(
            |x| if x.re > 3.0 { Err(Error::OnCut(x)) } else { Ok(x) },
            c(0.0),
            &[1.0, 1.5, 2.5],
        )
        .unwrap_err();
        match err {
            Error::Subset { subset, .. } => assert_eq!(subset, vec![2]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn params_validation() {
        assert!(BetaParams::probabilistic(vec![1.0, 2.0], vec![1.0, 1.0]).is_err());
        assert!(BetaParams::probabilistic(vec![1.0], vec![0.0, 1.0]).is_err());
        assert!(BetaParams::probabilistic(vec![1.0], vec![1.0, -0.1]).is_err());
        assert!(BetaParams::analytic(vec![1.0, 2.0], vec![1.0, -0.3, -0.3]).is_ok());
        assert!(BetaParams::analytic(vec![1.0], vec![1.0, -0.6, -0.6]).is_err());
        assert!(BetaParams::probabilistic(vec![], vec![1.0; 22]).is_err());
    }

    #[test]
    fn eta_closed_forms() {
        let q = Complex64::new(0.8, -0.4);
        let e = beta(vec![], vec![1.7]).eta(q).unwrap();
        assert!((e - 1.7 / (q + 1.7)).norm() < 1e-15);
        let e = beta(vec![1.0], vec![1.0, 1.0]).eta(c(1.0)).unwrap();
        assert!((e.re - 0.5).abs() < 1e-12);
        assert_eq!(beta(vec![1.0], vec![1.0, 1.0]).eta(c(0.0)).unwrap(), c(1.0));
    }

    #[test]
    fn levy_examples() {
        let b = beta(vec![], vec![1.3]);
        let got = b.levy_exponent(c(1.0)).unwrap();
        assert!((got.re - (1.3f64 / 2.3).ln()).abs() < 1e-12, "{got}");
        assert_eq!(b.levy_exponent(c(0.0)).unwrap(), c(0.0));
        assert!(matches!(b.levy_exponent(c(-1.3)), Err(Error::MethodDomain(_))));
        let atom = beta(vec![], vec![1.3, 0.6]).atom_probability().unwrap();
        assert!((atom - 1.3 / 1.9).abs() < 1e-12);
    }

    #[test]
    fn levy_matches_direct_for_double_gamma() {
        let b = beta(vec![1.0, 0.7], vec![0.9, 0.5, 1.4]);
        for q in [c(0.5), c(3.0), Complex64::new(-0.4, 1.5), Complex64::new(2.0, -4.0)] {
            let direct = b.mellin_eta(q, EtaMethod::DirectSn).unwrap();
            let levy = b.mellin_eta(q, EtaMethod::LevyIntegral).unwrap();
            assert!((direct.value - levy.value).norm() < 1e-9 * direct.value.norm(), "q={q}: {direct:?} {levy:?}");
        }
    }

    #[test]
    fn atom_examples() {
        let (b0, b1, b2) = (0.8, 1.1, 2.5);
        let atom = beta(vec![], vec![b0, b1, b2]).atom_probability().unwrap();
        let exact = b0 * (b0 + b1 + b2) / ((b0 + b1) * (b0 + b2));
        assert!((atom - exact).abs() < 1e-12);
        assert!(matches!(beta(vec![1.0], vec![1.0, 1.0]).atom_probability(), Err(Error::NotCompoundPoisson)));
        let mid = beta(vec![1.0], vec![1.0, 1.0, 1.0]).atom_probability().unwrap();
        assert!(mid > 0.0 && mid < 1.0);
    }

    #[test]
    fn profile_and_positivity_examples() {
        let p = beta(vec![], vec![1.0, 1.0]);
        match p.asymptotic_profile().unwrap() {
            AsymptoticProfile::Constant(v) => assert!((v - 0.5).abs() < 1e-14),
            other => panic!("{other:?}"),
        }
        assert!((p.positivity_check().unwrap() - 2f64.ln()).abs() < 1e-14);
        let p = beta(vec![], vec![1.0, 1.0, 1.0]);
        assert!((p.positivity_check().unwrap() - (4.0f64 / 3.0).ln()).abs() < 1e-14);
        let tau = 1.7;
        let p = beta(vec![1.0, tau], vec![0.4, 0.9, 1.3]);
        assert_eq!(p.asymptotic_profile().unwrap(), AsymptoticProfile::LogSlope(-0.9 * 1.3 / tau));
        assert!(beta(vec![1.0], vec![1.0, 1.0, 1.0]).positivity_check().unwrap() > 0.0);
    }

    #[test]
    fn functional_equation_examples() {
        let u = beta(vec![1.0], vec![1.0, 1.0]);
        assert!((u.functional_equation_rhs(c(0.0), 0).unwrap().re - 0.5).abs() < 1e-12);
        let b = beta(vec![1.0, 1.6], vec![0.7, 0.3, 1.2]);
        for q in [c(0.3), Complex64::new(-0.2, 0.9)] {
            for i in 0..2 {
                let lhs = b.eta(q + b.params().a()[i]).unwrap();
                let rhs = b.functional_equation_rhs(q, i).unwrap();
                assert!((lhs - rhs).norm() < 1e-10 * lhs.norm());
            }
        }
    }

    #[test]
    fn symmetry_examples() {
        let b = beta(vec![1.0, 1.6], vec![0.7, 0.3, 1.2]);
        let r = b.symmetry_residuals(Complex64::new(0.4, 0.3), 0.0, 0, 1).unwrap();
        assert_eq!(r[0], 0.0);
        let r = b.symmetry_residuals(Complex64::new(0.4, 0.3), 0.8, 1, 2).unwrap();
        assert!(r.iter().all(|x| *x < 1e-10), "{r:?}");
    }
}
