//! Barnes multiple zeta `ζ_M(s, w | a) = Σ_k (w + k·a)^{-s}` by direct
//! lattice summation, for `Re(s) > M + 1` and `Re(w) > 0`.
//!
//! The smallest scale is summed in closed form through the Hurwitz zeta
//! function; the remaining `M - 1` directions are enumerated explicitly up to
//! a radius `R` whose tail bound falls below the requested tolerance.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multigamma::{GammaParams, QuadratureSpec};

// B_{2k} / (2k)! for k = 1..10
const BERNOULLI_SCALED: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -5.284_190_138_687_493e-10,
    1.338_253_653_068_467_9e-11,
    -3.389_680_296_322_583e-13,
    8.586_062_056_277_845e-15,
    -2.174_868_698_558_062e-16,
];

const TERM_BUDGET: usize = 4_000_000;

/// Hurwitz zeta `Σ_{j≥0} (x + j)^{-s}` for `Re(x) > 0`, `Re(s) > 1`, by
/// Euler–Maclaurin summation.
pub fn hurwitz_zeta(s: Complex64, x: Complex64) -> Complex64 {
    let n = (15.0 + s.norm()).ceil() as usize;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..n {
        sum += (-s * (x + j as f64).ln()).exp();
    }
    let y = x + n as f64;
    let log_y = y.ln();
    let y_pow = (-s * log_y).exp();
    sum += y_pow * y / (s - 1.0) + 0.5 * y_pow;
    // Σ_k B_{2k}/(2k)! s(s+1)...(s+2k-2) y^{-s-2k+1}
    let inv = 1.0 / y;
    let mut rising = s;
    let mut power = y_pow * inv;
    for (k, &b) in BERNOULLI_SCALED.iter().enumerate() {
        let term = rising * power * b;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
        let k = k as f64;
        rising *= (s + 2.0 * k + 1.0) * (s + 2.0 * k + 2.0);
        power *= inv * inv;
    }
    sum
}

fn enumerate_outer(
    scales: &[f64],
    radius: f64,
    partial: f64,
    visit: &mut impl FnMut(f64),
    count: &mut usize,
) -> Result<()> {
    match scales.split_first() {
        None => {
            *count += 1;
            if *count > TERM_BUDGET {
                return Err(Error::BudgetExceeded {
                    requested: *count,
                    budget: TERM_BUDGET,
                });
            }
            visit(partial);
            Ok(())
        }
        Some((&first, rest)) => {
            let mut value = partial;
            while value <= radius {
                enumerate_outer(rest, radius, value, visit, count)?;
                value += first;
            }
            Ok(())
        }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Bound on the contribution of outer lattice points with `k·a_outer > R`.
fn tail_bound(sigma: f64, radius: f64, outer: &[f64], inner: f64) -> f64 {
    let d = outer.len();
    if d == 0 {
        return 0.0;
    }
    let density = factorial(d - 1) * outer.iter().product::<f64>();
    // counting function N(r) ≤ (r + Σa)^d / (d! ∏a) ≤ (2r)^d / (d! ∏a) for r ≥ Σa;
    // each outer point contributes at most r^{-σ} + r^{1-σ} / (a_in (σ - 1))
    let lead = radius.powf(d as f64 - sigma) / (sigma - d as f64);
    let next = radius.powf(d as f64 + 1.0 - sigma) / (inner * (sigma - 1.0) * (sigma - d as f64 - 1.0));
    2f64.powf(d as f64 + 1.0) * (lead + next) / density
}

/// Barnes multiple zeta function by direct lattice summation.
pub fn zeta_barnes(params: &GammaParams, s: Complex64, w: Complex64, quad: &QuadratureSpec) -> Result<Complex64> {
    let m = params.order();
    let bound = m as f64 + 1.0;
    if s.re <= bound {
        return Err(Error::OutOfOracleRegime { re_s: s.re, bound });
    }
    if w.re <= 0.0 {
        return Err(Error::InvalidParams(format!("lattice sum needs Re(w) > 0, got {w}")));
    }
    if m == 0 {
        return Ok((-s * w.ln()).exp());
    }
    let mut scales = params.scales().to_vec();
    scales.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let inner = scales[0];
    let outer = &scales[1..];
    let prefactor = (-s * inner.ln()).exp();
    let row = |shift: f64| prefactor * hurwitz_zeta(s, (w + shift) / inner);

    let sigma = s.re;
    let min_radius = 2.0 * outer.iter().sum::<f64>();
    let mut radius = min_radius.max(8.0 * outer.first().copied().unwrap_or(1.0));
    loop {
        let mut total = Complex64::new(0.0, 0.0);
        let mut count = 0;
        enumerate_outer(outer, radius, 0.0, &mut |shift| total += row(shift), &mut count)?;
        let tail = tail_bound(sigma, radius.max(min_radius), outer, inner);
        if tail <= quad.abs_tol.max(quad.rel_tol * total.norm()) {
            return Ok(total);
        }
        radius *= 2.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    const ZETA3: f64 = 1.202_056_903_159_594_2;

    #[test]
    fn order_zero_is_a_power() {
        let w = Complex64::new(0.7, 0.3);
        let s = Complex64::new(2.5, -1.0);
        let got = zeta_barnes(&GammaParams::trivial(), s, w, &QuadratureSpec::default()).unwrap();
        assert!((got - (-s * w.ln()).exp()).norm() < 1e-15);
    }

    #[test]
    fn riemann_and_scaled_hurwitz() {
        let quad = QuadratureSpec::default();
        let unit = GammaParams::new(vec![1.0]).unwrap();
        let z = zeta_barnes(&unit, c(3.0), c(1.0), &quad).unwrap();
        assert!((z.re - ZETA3).abs() < 1e-14);
        let two = GammaParams::new(vec![2.0]).unwrap();
        let z = zeta_barnes(&two, c(3.0), c(2.0), &quad).unwrap();
        assert!((z.re - ZETA3 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn hurwitz_reference_values() {
        // mpmath.zeta(s, x) at 30 digits
        let v = hurwitz_zeta(c(3.5), c(0.7));
        assert!((v.re - 3.692_768_064_686_827).abs() < 1e-13 * 3.7, "{v}");
        let v = hurwitz_zeta(Complex64::new(4.0, 2.0), Complex64::new(1.3, -0.5));
        let expected = Complex64::new(0.097_129_139_362_195_88, 0.069_352_626_874_109_99);
        assert!((v - expected).norm() < 1e-13, "{v}");
    }

    #[test]
    fn out_of_regime() {
        let p = GammaParams::new(vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            zeta_barnes(&p, c(3.0), c(1.0), &QuadratureSpec::default()),
            Err(Error::OutOfOracleRegime { .. })
        ));
    }

    #[test]
    fn double_zeta_difference_equation() {
        // ζ_2(s, w) - ζ_2(s, w + a_1) = ζ_1(s, w | a_2)
        let quad = QuadratureSpec::default();
        let p = GammaParams::new(vec![1.0, 2f64.sqrt()]).unwrap();
        let s = Complex64::new(5.0, 0.5);
        let w = Complex64::new(0.8, 0.2);
        let lhs = zeta_barnes(&p, s, w, &quad).unwrap() - zeta_barnes(&p, s, w + 1.0, &quad).unwrap();
        let rhs = zeta_barnes(&p.without(0), s, w, &quad).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm(), "{lhs} vs {rhs}");
    }
}
