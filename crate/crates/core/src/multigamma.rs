//! Barnes multiple gamma functions `Γ_M(w | a)` in Ruijsenaars' normalization.
//!
//! The generating function is `f(t) = t^M ∏_j (1 - e^{-a_j t})^{-1}` and the
//! generalized Bernoulli polynomials are `B_m(x) = d^m/dt^m [f(t) e^{-xt}]` at
//! `t = 0`. For `Re(w)` comfortably positive, `L_M(w) = log Γ_M(w)` is computed
//! from the Malmstén integral
//!
//! ```text
//! L_M(w) = ∫_0^∞ dt / t^{M+1} ( e^{-wt} f(t) - Σ_{k<M} t^k B_k(w) / k! - t^M e^{-t} B_M(w) / M! )
//! ```
//!
//! split at a small `t0`: below `t0` the numerator is replaced by its Taylor
//! series and integrated term by term; above `t0` the polynomial and `E_1`
//! pieces are integrated in closed form and only `∫ e^{-wt} f(t) t^{-M-1} dt`
//! is left to quadrature. Elsewhere off the cut the functional equation
//! `L_M(w) = L_{M-1}(w | â_i) + L_M(w + a_i)` shifts the argument to the right.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, PoleReport, Result};
use crate::euler::exp_integral_e1;
use crate::quadrature::{integrate_log_scale, Tolerance};

/// Order `M` and scales `a = (a_1, ..., a_M)` of a multiple gamma function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaParams {
    a: Vec<f64>,
}

impl GammaParams {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if let Some(bad) = a.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::InvalidParams(format!("scales must be finite and positive, got {bad}")));
        }
        Ok(Self { a })
    }

    /// `M = 0`, for which `f ≡ 1` and `Γ_0(w) = 1/w`.
    pub fn trivial() -> Self {
        Self { a: Vec::new() }
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    pub fn scales(&self) -> &[f64] {
        &self.a
    }

    /// The same parameters with `a_i` removed (`â_i`), zero-based index.
    pub fn without(&self, i: usize) -> GammaParams {
        let mut a = self.a.clone();
        a.remove(i);
        GammaParams { a }
    }

    pub fn max_scale(&self) -> f64 {
        self.a.iter().copied().fold(0.0, f64::max)
    }

    /// Index of the largest scale; ties go to the first occurrence.
    fn argmax_scale(&self) -> usize {
        let mut best = 0;
        for (j, &x) in self.a.iter().enumerate() {
            if x > self.a[best] {
                best = j;
            }
        }
        best
    }

    /// `f(0) = 1 / (a_1 ... a_M)`.
    pub fn f_at_zero(&self) -> f64 {
        self.a.iter().map(|x| 1.0 / x).product()
    }

    /// `f(t) / t^M = ∏ (1 - e^{-a_j t})^{-1}`, the regular part of the Lévy densities.
    pub fn f_over_power(&self, t: f64) -> f64 {
        self.a.iter().map(|&x| -1.0 / (-x * t).exp_m1()).product()
    }
}

/// Tolerances and discretisation settings shared by every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Override for the Malmstén split point; capped so the Taylor series converges.
    pub split_point: Option<f64>,
    /// Highest Taylor order used near `t = 0`; defaults to `M + 30`.
    pub series_order: Option<usize>,
    pub max_refinements: usize,
    /// Poles are reported when `|w - pole| < pole_tolerance (1 + |w|)`.
    pub pole_tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-11,
            split_point: None,
            series_order: None,
            max_refinements: 400,
            pole_tolerance: 1e-8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidParams("tolerances must be positive".into()));
        }
        if let Some(t0) = self.split_point {
            if !(t0 > 0.0) {
                return Err(Error::InvalidParams("split point must be positive".into()));
            }
        }
        if self.max_refinements == 0 {
            return Err(Error::InvalidParams("max_refinements must be positive".into()));
        }
        Ok(())
    }

    pub fn series_order(&self, m: usize) -> Result<usize> {
        let order = self.series_order.unwrap_or(m + 30);
        if order < m + 10 {
            return Err(Error::InvalidParams(format!("series order {order} below M + 10 = {}", m + 10)));
        }
        Ok(order)
    }

    pub(crate) fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.abs_tol * 0.01, self.rel_tol * 0.01, self.max_refinements)
    }
}

/// A point of evaluation together with its distance to the cut `(-∞, 0]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg {
    pub value: Complex64,
    pub cut_distance: f64,
}

impl ComplexArg {
    pub fn new(value: Complex64) -> Self {
        let cut_distance = if value.re > 0.0 { value.norm() } else { value.im.abs() };
        Self { value, cut_distance }
    }

    pub fn on_cut(&self) -> bool {
        self.cut_distance == 0.0
    }
}

impl From<Complex64> for ComplexArg {
    fn from(value: Complex64) -> Self {
        ComplexArg::new(value)
    }
}

/// A value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy)]
pub struct Valued {
    pub value: Complex64,
    pub error: f64,
}

// ---------------------------------------------------------------------------
// Taylor coefficients and Bernoulli polynomials

const MAX_ORDER: usize = 300;

fn riemann_zeta_even(s: u32) -> f64 {
    match s {
        2 => PI * PI / 6.0,
        4 => PI.powi(4) / 90.0,
        6 => PI.powi(6) / 945.0,
        _ => {
            let s = s as f64;
            let n = 20.0f64;
            let mut sum: f64 = (1..20).map(|k| (k as f64).powf(-s)).sum();
            // Euler-Maclaurin tail from k = 20
            sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
                - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0;
            sum
        }
    }
}

/// `B_n^+ / n!`, the Taylor coefficients of `x / (1 - e^{-x})`.
fn bernoulli_plus_scaled() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = vec![0.0; MAX_ORDER + 1];
        out[0] = 1.0;
        out[1] = 0.5;
        let two_pi = 2.0 * PI;
        for m in 1..=(MAX_ORDER / 2) {
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            out[2 * m] = sign * 2.0 * riemann_zeta_even(2 * m as u32) / two_pi.powi(2 * m as i32);
        }
        out
    })
}

type CoeffKey = (Vec<u64>, usize);

fn coeff_cache() -> &'static RwLock<HashMap<CoeffKey, Arc<[f64]>>> {
    static CACHE: OnceLock<RwLock<HashMap<CoeffKey, Arc<[f64]>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Taylor coefficients `c_0..c_order` of `f` at `t = 0`; `c_0 = 1/(a_1...a_M)`.
///
/// Results are cached per `(a, order)`; concurrent readers share the cache and
/// inserts are serialized.
pub fn taylor_coeffs_f(params: &GammaParams, order: usize) -> Result<Arc<[f64]>> {
    if order > MAX_ORDER {
        return Err(Error::BudgetExceeded {
            requested: order,
            budget: MAX_ORDER,
        });
    }
    let key: CoeffKey = (params.a.iter().map(|x| x.to_bits()).collect(), order);
    if let Some(hit) = coeff_cache().read().expect("cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let beta = bernoulli_plus_scaled();
    let mut coeffs = vec![0.0; order + 1];
    coeffs[0] = 1.0;
    for &scale in &params.a {
        // t / (1 - e^{-a t}) = Σ β_n a^{n-1} t^n
        let factor: Vec<f64> = (0..=order).map(|n| beta[n] * scale.powi(n as i32 - 1)).collect();
        let mut next = vec![0.0; order + 1];
        for (n, slot) in next.iter_mut().enumerate() {
            *slot = (0..=n).map(|k| coeffs[k] * factor[n - k]).sum();
        }
        coeffs = next;
    }
    let coeffs: Arc<[f64]> = coeffs.into();
    coeff_cache()
        .write()
        .expect("cache poisoned")
        .entry(key)
        .or_insert_with(|| coeffs.clone());
    Ok(coeffs)
}

/// `f(t) = t^M ∏ (1 - e^{-a_j t})^{-1}` for `t ≥ 0`.
pub fn f_eval(params: &GammaParams, t: f64) -> f64 {
    if t == 0.0 {
        return params.f_at_zero();
    }
    if t < 1e-3 {
        // series avoids the 0/0 form of the product near t = 0
        if let Ok(c) = taylor_coeffs_f(params, 12) {
            return c.iter().rev().fold(0.0, |acc, &ck| acc * t + ck);
        }
    }
    params.a.iter().map(|&x| t / (-(-x * t).exp_m1())).product()
}

/// `B_n(x) / n!` for `n = 0..=order`, from the cached coefficients of `f`.
fn bernoulli_scaled_all(coeffs: &[f64], x: Complex64, order: usize) -> Vec<Complex64> {
    let mut powers = Vec::with_capacity(order + 1);
    let mut p = Complex64::new(1.0, 0.0);
    for j in 0..=order {
        if j > 0 {
            p = p * (-x) / j as f64;
        }
        powers.push(p);
    }
    (0..=order)
        .map(|n| (0..=n).map(|k| powers[n - k] * coeffs[k]).sum())
        .collect()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Generalized Bernoulli polynomial `B_m(x) = d^m/dt^m [f(t) e^{-xt}]` at `t = 0`.
pub fn bernoulli_poly(params: &GammaParams, m: usize, x: Complex64, quad: &QuadratureSpec) -> Result<Complex64> {
    let budget = quad.series_order(params.order())?;
    if m > budget {
        return Err(Error::BudgetExceeded { requested: m, budget });
    }
    let coeffs = taylor_coeffs_f(params, m)?;
    let scaled = bernoulli_scaled_all(&coeffs, x, m);
    Ok(scaled[m] * factorial(m))
}

// ---------------------------------------------------------------------------
// Pole lattice

fn lattice_points(a: &[f64], limit: f64, partial: f64, out: &mut Vec<f64>) {
    match a.split_first() {
        None => out.push(partial),
        Some((&first, rest)) => {
            let mut value = partial;
            while value <= limit {
                lattice_points(rest, limit, value, out);
                value += first;
            }
        }
    }
}

/// Nearest pole `-(k·a)` of `Γ_M` within `radius` of `w`, with its multiplicity.
pub fn pole_query(params: &GammaParams, w: Complex64, radius: f64) -> Option<PoleReport> {
    if !(radius > 0.0) || w.im.abs() >= radius || w.re > radius {
        return None;
    }
    let limit = -w.re + radius;
    let mut points = Vec::new();
    lattice_points(&params.a, limit, 0.0, &mut points);
    let nearest = points
        .iter()
        .copied()
        .filter(|lam| (w + lam).norm() < radius)
        .min_by(|x, y| (w + x).norm().partial_cmp(&(w + y).norm()).unwrap())?;
    let coincide = 1e-12 * (1.0 + nearest);
    let multiplicity = points.iter().filter(|lam| (**lam - nearest).abs() <= coincide).count();
    Some(PoleReport {
        location: Complex64::new(-nearest, 0.0),
        multiplicity,
    })
}

fn check_argument(params: &GammaParams, w: Complex64, quad: &QuadratureSpec) -> Result<()> {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::InvalidParams(format!("non-finite argument {w}")));
    }
    let radius = quad.pole_tolerance * (1.0 + w.norm());
    if let Some(pole) = pole_query(params, w, radius) {
        return Err(Error::NearPole { arg: w, pole });
    }
    if ComplexArg::new(w).on_cut() {
        return Err(Error::OnCut(w));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Log-gamma

/// Real part below which the argument is shifted right before quadrature.
fn shift_threshold(w: Complex64) -> f64 {
    1.0f64.max(0.5 * w.im.abs())
}

fn default_split(params: &GammaParams, w: Complex64, quad: &QuadratureSpec) -> f64 {
    // keeps a_max t0 well inside the radius 2π/a_max and |w| t0 ≤ 1
    let cap = 0.5f64.min(1.5 / params.max_scale().max(f64::MIN_POSITIVE)).min(1.0 / w.norm());
    match quad.split_point {
        Some(t0) => t0.min(cap),
        None => cap,
    }
}

/// `∫_0^x (1 - e^{-t}) / t dt`.
fn ein(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..100 {
        term *= -x / k as f64;
        let contrib = -term / k as f64;
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// The Malmstén integral for `Re(w) > 0`, with an absolute error estimate.
fn malmsten(params: &GammaParams, w: Complex64, quad: &QuadratureSpec) -> Result<Valued> {
    let m = params.order();
    let order = quad.series_order(m)?;
    let coeffs = taylor_coeffs_f(params, order)?;
    let scaled = bernoulli_scaled_all(&coeffs, w, order);
    let t0 = default_split(params, w, quad);

    // [0, t0]: numerator / t^{M+1} = Σ_{n>M} B_n t^{n-M-1}/n! + B_M/M! (1 - e^{-t})/t
    let mut head = scaled[m] * ein(t0);
    let mut head_scale = head.norm();
    let mut power = 1.0;
    let mut last = 0.0;
    for n in (m + 1)..=order {
        power *= t0;
        let term = scaled[n] * (power / (n - m) as f64);
        head += term;
        head_scale += term.norm();
        last = term.norm();
    }
    let series_error = 2.0 * last;

    // [t0, ∞): polynomial and E_1 pieces in closed form
    let mut poly = Complex64::new(0.0, 0.0);
    for (k, b) in scaled.iter().enumerate().take(m) {
        poly -= *b * (t0.powi(k as i32 - m as i32) / (m - k) as f64);
    }
    let e1_part = -scaled[m] * exp_integral_e1(t0);

    // remaining ∫_{t0}^∞ e^{-wt} f(t) / t^{M+1} dt on a log scale
    let rate = w.re;
    let g0 = params.f_over_power(t0);
    let t_max = (2.0 * t0).max((42.0 + g0.max(1.0).ln()) / rate);
    let remainder = params.f_over_power(t_max) * (-rate * t_max).exp() / (rate * t_max);
    let mut breaks = vec![1.0 / w.norm(), 1.0 / rate, 1.0];
    if m > 0 {
        breaks.push(1.0 / params.max_scale());
    }
    let integral = integrate_log_scale(
        |t| (-w * t).exp() * (params.f_over_power(t) / t),
        t0,
        t_max,
        &breaks,
        quad.tolerance(),
    )?;

    let value = head + poly + e1_part + integral.value;
    let rounding = 8.0 * f64::EPSILON * (head_scale + poly.norm() + e1_part.norm() + integral.value.norm());
    Ok(Valued {
        value,
        error: integral.error + remainder + series_error + rounding,
    })
}

fn log_gamma_unchecked(params: &GammaParams, w: Complex64, quad: &QuadratureSpec) -> Result<Valued> {
    if params.order() == 0 {
        return Ok(Valued {
            value: -w.ln(),
            error: 4.0 * f64::EPSILON * w.ln().norm(),
        });
    }
    let threshold = shift_threshold(w);
    if w.re >= threshold {
        return malmsten(params, w, quad);
    }
    // L_M(w) = Σ_{j<n} L_{M-1}(w + j a* | â*) + L_M(w + n a*)
    let star = params.argmax_scale();
    let step = params.a[star];
    let shifts = ((threshold - w.re) / step).ceil().max(1.0) as usize;
    let reduced = params.without(star);
    let mut total = malmsten(params, w + step * shifts as f64, quad)?;
    for j in 0..shifts {
        let part = log_gamma_unchecked(&reduced, w + step * j as f64, quad)?;
        total.value += part.value;
        total.error += part.error;
    }
    Ok(total)
}

/// `L_M(w | a) = log Γ_M(w | a)` with an absolute error estimate.
pub fn log_gamma_m_eval(params: &GammaParams, w: Complex64, quad: &QuadratureSpec) -> Result<Valued> {
    check_argument(params, w, quad)?;
    log_gamma_unchecked(params, w, quad)
}

/// `L_M(w | a) = log Γ_M(w | a)` on `C \ (-∞, 0]`, away from the pole lattice.
pub fn log_gamma_m(params: &GammaParams, w: Complex64, quad: &QuadratureSpec) -> Result<Complex64> {
    log_gamma_m_eval(params, w, quad).map(|v| v.value)
}

/// `Γ_M(w | a) = exp L_M(w | a)`.
pub fn gamma_m(params: &GammaParams, w: Complex64, quad: &QuadratureSpec) -> Result<Complex64> {
    log_gamma_m(params, w, quad).map(|l| l.exp())
}

/// The large-`|w|` expansion of `L_M(w)` without its `O(1/w)` remainder, and a
/// heuristic size of that remainder.
///
/// Diagnostic only; nothing in the crate substitutes it for [`log_gamma_m`].
pub fn log_gamma_asymptotic(params: &GammaParams, w: Complex64) -> Result<(Complex64, f64)> {
    if w.norm() == 0.0 || ComplexArg::new(w).on_cut() {
        return Err(Error::ArgOutOfRange(w));
    }
    let m = params.order();
    let coeffs = taylor_coeffs_f(params, m + 2)?;
    let at_w = bernoulli_scaled_all(&coeffs, w, m);
    // B_k(0)/k! is just c_k
    let mut value = -at_w[m] * w.ln();
    for k in 0..=m {
        let harmonic: f64 = (1..=(m - k)).map(|l| 1.0 / l as f64).sum();
        if harmonic == 0.0 {
            continue;
        }
        value += (-w).powi((m - k) as i32) * (coeffs[k] * harmonic / factorial(m - k));
    }
    // leading remainder terms c_n (n-M-1)! w^{M-n}
    let r = w.norm();
    let scale = coeffs[m + 1].abs() / r + coeffs[m + 2].abs() / (r * r);
    Ok((value, scale))
}
