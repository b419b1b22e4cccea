//! Euler's gamma function for real and complex arguments.

use std::f64::consts::PI;

use num_complex::Complex64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_405_617_6;

// B_{2k} / (2k (2k-1)) for k = 1..12
const STIRLING: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
    77683.0 / 5796.0,
    -236_364_091.0 / 1_506_960.0,
];

const SHIFT_TO: f64 = 15.0;

fn stirling(z: Complex64) -> Complex64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for c in STIRLING {
        series += power * c;
        power *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series
}

/// Principal branch of `log Γ(z)`: analytic on the plane cut along
/// `(-∞, 0]`, real on the positive axis.
///
/// Poles at non-positive integers produce an infinite real part.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < SHIFT_TO {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

/// `log |Γ(x)|` for real `x`.
pub fn ln_gamma_real(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        // reflection keeps the shift loop short for very negative x
        let s = (PI * x).sin().abs();
        return PI.ln() - s.ln() - ln_gamma_real(1.0 - x);
    }
    let mut product = 1.0;
    let mut w = x;
    while w < SHIFT_TO {
        product *= w;
        w += 1.0;
    }
    stirling(Complex64::new(w, 0.0)).re - product.ln()
}

/// `Γ(x)` for real `x` (sign included).
pub fn gamma_real(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    let magnitude = ln_gamma_real(x).exp();
    if x > 0.0 {
        return magnitude;
    }
    // sign of Γ on (-n-1, -n) is (-1)^(n+1)
    let n = (-x).floor() as i64;
    if n % 2 == 0 {
        -magnitude
    } else {
        magnitude
    }
}

/// `Γ(z)` for complex `z`.
pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// `log B(x, y) = log Γ(x) + log Γ(y) - log Γ(x + y)` for positive arguments.
pub fn ln_beta(x: f64, y: f64) -> f64 {
    ln_gamma_real(x) + ln_gamma_real(y) - ln_gamma_real(x + y)
}

/// Exponential integral `E_1(x)` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> f64 {
    if x <= 1.0 {
        // E_1(x) = -γ - ln x + Σ_{k≥1} (-1)^{k+1} x^k / (k k!)
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..200 {
            term *= -x / k as f64;
            let contrib = -term / k as f64;
            sum += contrib;
            if contrib.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        -EULER_GAMMA - x.ln() + sum
    } else {
        // continued fraction (modified Lentz)
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let delta = c * d;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}
