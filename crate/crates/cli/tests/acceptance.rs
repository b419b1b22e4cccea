//! Acceptance criteria 1-13. Prints one line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use barnes::selberg::{decomposition_check, decomposition_grid, moment_checks};
use barnes::{
    log_gamma_m, mellin_m, reduction_factors, s_bernoulli, sample, selberg_average_mc, selberg_product, BarnesBeta,
    BetaParams, EtaMethod, GammaParams, MomentSign, QuadratureSpec, SampleBatch, SamplerConfig, SelbergParams,
    ShintaniVariant,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::ln_gamma as oracle_ln_gamma;

type Check = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn beta(a: Vec<f64>, b: Vec<f64>) -> BarnesBeta {
    BarnesBeta::new(BetaParams::probabilistic(a, b).expect("valid parameters"), quad()).expect("valid quadrature")
}

fn rel(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / rhs.norm()
}

/// Tracks the worst residual and the first failing case.
struct Worst {
    value: f64,
    case: String,
    failure: Option<String>,
    count: usize,
}

impl Worst {
    fn new() -> Self {
        Self {
            value: 0.0,
            case: String::new(),
            failure: None,
            count: 0,
        }
    }

    fn record(&mut self, residual: f64, limit: f64, case: impl FnOnce() -> String) {
        self.count += 1;
        let bad = !(residual < limit);
        if residual > self.value || bad && self.failure.is_none() {
            let text = case();
            if residual > self.value || residual.is_nan() {
                self.value = residual;
                self.case.clone_from(&text);
            }
            if bad && self.failure.is_none() {
                self.failure = Some(format!("{text}: residual {residual:e} ≥ {limit:e}"));
            }
        }
    }

    fn error(&mut self, case: String, e: impl std::fmt::Display) {
        self.count += 1;
        if self.failure.is_none() {
            self.failure = Some(format!("{case}: {e}"));
        }
    }

    fn finish(self) -> Check {
        match self.failure {
            Some(f) => Err(f),
            None if self.case.is_empty() => Ok(format!("{} cases", self.count)),
            None => Ok(format!("{} cases, worst {:.2e} at {}", self.count, self.value, self.case)),
        }
    }
}

// 1 ------------------------------------------------------------------------

fn gamma_one_reduction() -> Check {
    let mut worst = Worst::new();
    for a in [0.5, 1.0, 2.0] {
        let params = GammaParams::new(vec![a]).unwrap();
        for w in [0.5, 1.0, 2.5, 10.0] {
            let expected = (w / a - 0.5) * a.ln() - 0.5 * (2.0 * PI).ln() + oracle_ln_gamma(w / a);
            match log_gamma_m(&params, c(w, 0.0), &quad()) {
                Ok(got) => worst.record((got - expected).norm(), 1e-10, || format!("w={w} a={a}")),
                Err(e) => worst.error(format!("w={w} a={a}"), e),
            }
        }
    }
    worst.finish()
}

// 2 ------------------------------------------------------------------------

fn random_scales(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.random_range(0.3..2.5)).collect()
}

fn random_shifts(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..=n).map(|_| rng.random_range(0.2..2.0)).collect()
}

fn bernoulli_identities() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = Worst::new();
    for m in 0..=3 {
        for n in 0..=4 {
            for _ in 0..100 {
                let gamma = GammaParams::new(random_scales(&mut rng, m)).unwrap();
                let b = random_shifts(&mut rng, n);
                let q = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                let target = gamma.f_at_zero() * (1..=n).map(|k| k as f64).product::<f64>() * b[1..].iter().product::<f64>();
                for k in 0..=n {
                    let case = || format!("M={m} N={n} n={k} a={:?} b={b:?} q={q}", gamma.scales());
                    match s_bernoulli(&gamma, &b, k, q, &quad()) {
                        Ok((value, scale)) if k < n => worst.record(value.norm() / scale, 1e-9, case),
                        Ok((value, _)) => worst.record((value - target).norm() / target.abs(), 1e-9, case),
                        Err(e) => worst.error(case(), e),
                    }
                }
            }
        }
    }
    worst.finish()
}

// 3 ------------------------------------------------------------------------

fn functional_equation_and_symmetries() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = Worst::new();
    for (m, n) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
        for _ in 0..4 {
            let b = beta(random_scales(&mut rng, m), random_shifts(&mut rng, n));
            let q = c(rng.random_range(-0.15..1.5), rng.random_range(-1.5..1.5));
            let x = rng.random_range(0.1..1.5);
            let label = || format!("a={:?} b={:?} q={q}", b.params().a(), b.params().b());
            for i in 0..m {
                let fe = (|| -> barnes::Result<f64> {
                    let lhs = b.eta(q + b.params().a()[i])?;
                    let rhs = b.functional_equation_rhs(q, i)?;
                    Ok((lhs - rhs).norm() / rhs.norm().max(1.0))
                })();
                match fe {
                    Ok(r) => worst.record(r, 1e-9, || format!("functional equation i={i} {}", label())),
                    Err(e) => worst.error(label(), e),
                }
                for j in 1..=n {
                    match b.symmetry_residuals(q, x, i, j) {
                        Ok(rs) => {
                            for (k, r) in rs.into_iter().enumerate() {
                                worst.record(r, 1e-9, || format!("symmetry {} i={i} j={j} x={x} {}", k + 1, label()));
                            }
                        }
                        Err(e) => worst.error(label(), e),
                    }
                }
            }
        }
    }
    worst.finish()
}

// 4 ------------------------------------------------------------------------

fn method_agreement() -> Check {
    let mut worst = Worst::new();
    let sets = [
        (vec![1.0], vec![0.8, 1.3]),
        (vec![1.4], vec![0.6, 0.9, 1.2]),
        (vec![1.0, 1.6], vec![0.9, 0.5, 1.1]),
    ];
    for (a, bs) in sets {
        let b = beta(a, bs);
        let floor = b.params().min_subset_sum();
        for k in 0..20 {
            let t = k as f64 / 19.0;
            let q = c(-0.5 * floor + t * 2.5, (2.0 * PI * t).sin() * 1.5);
            let label = || format!("a={:?} b={:?} q={q}", b.params().a(), b.params().b());
            let values = (|| -> barnes::Result<[Complex64; 3]> {
                Ok([
                    b.mellin_eta(q, EtaMethod::DirectSn)?.value,
                    b.mellin_eta(q, EtaMethod::LevyIntegral)?.value,
                    b.shintani_product(q, ShintaniVariant::Shifted, 0, None)?.value,
                ])
            })();
            match values {
                Ok([d, l, s]) => {
                    worst.record(rel(l, d), 1e-6, || format!("levy/direct {}", label()));
                    worst.record(rel(s, d), 1e-6, || format!("shintani/direct {}", label()));
                    worst.record(rel(s, l), 1e-6, || format!("shintani/levy {}", label()));
                }
                Err(e) => worst.error(label(), e),
            }
        }
    }
    worst.finish()
}

// 5 ------------------------------------------------------------------------

fn closed_forms() -> Check {
    let mut worst = Worst::new();
    let qs = [c(0.7, 0.0), c(2.5, 0.0), c(-0.3, 0.4), c(1.0, -3.0)];
    let (b0, b1, b2) = (1.3, 0.6, 2.1);
    let frac = |num: &[f64], den: &[f64], q: Complex64| {
        let mut z = c(1.0, 0.0);
        for x in num {
            z *= q + x;
        }
        for x in den {
            z /= q + x;
        }
        z
    };
    let cases: [(Vec<f64>, Box<dyn Fn(Complex64) -> Complex64>); 3] = [
        (vec![b0], Box::new(move |q| b0 / (q + b0))),
        (vec![b0, b1], Box::new(move |q| frac(&[b0 + b1], &[b0], q) * b0 / (b0 + b1))),
        (
            vec![b0, b1, b2],
            Box::new(move |q| frac(&[b0 + b1, b0 + b2], &[b0, b0 + b1 + b2], q) * b0 * (b0 + b1 + b2) / ((b0 + b1) * (b0 + b2))),
        ),
    ];
    for (bs, exact) in cases {
        let b = beta(vec![], bs.clone());
        for q in qs {
            match b.eta(q) {
                Ok(v) => worst.record(rel(v, exact(q)), 1e-12, || format!("N={} q={q}", bs.len() - 1)),
                Err(e) => worst.error(format!("b={bs:?} q={q}"), e),
            }
        }
    }
    // η_{1,1}(q | a, b) = Γ((q+b0)/a) Γ((b0+b1)/a) / (Γ(b0/a) Γ((q+b0+b1)/a))
    for (a, b0, b1) in [(1.0, 2.0, 3.0), (0.7, 0.9, 1.6), (2.5, 1.1, 0.4)] {
        let b = beta(vec![a], vec![b0, b1]);
        for q in [0.3, 1.0, 4.5, -0.5 * b0] {
            let exact = (oracle_ln_gamma((q + b0) / a) + oracle_ln_gamma((b0 + b1) / a)
                - oracle_ln_gamma(b0 / a)
                - oracle_ln_gamma((q + b0 + b1) / a))
            .exp();
            match b.eta(c(q, 0.0)) {
                Ok(v) => worst.record(rel(v, c(exact, 0.0)), 1e-10, || format!("η11 a={a} b=({b0},{b1}) q={q}")),
                Err(e) => worst.error(format!("η11 q={q}"), e),
            }
        }
    }
    worst.finish()
}

// 6 ------------------------------------------------------------------------

fn moments() -> Check {
    let mut worst = Worst::new();
    let sets = [
        (vec![1.0], vec![2.0, 3.0]),
        (vec![0.8, 1.3], vec![2.7, 0.5, 0.9]),
        (vec![1.0, 0.6], vec![3.1, 0.4, 0.7, 1.2]),
    ];
    for (a, bs) in sets {
        let b = beta(a.clone(), bs.clone());
        for i in 0..a.len() {
            for k in 1..=4usize {
                for (sign, s) in [(MomentSign::Positive, 1.0), (MomentSign::Negative, -1.0)] {
                    if s < 0.0 && k as f64 * a[i] >= bs[0] {
                        continue;
                    }
                    let label = || format!("a={a:?} b={bs:?} i={i} k={k} {sign:?}");
                    let pair = (|| -> barnes::Result<(f64, Complex64)> {
                        Ok((b.integer_moment(i, k, sign)?, b.eta(c(s * k as f64 * a[i], 0.0))?))
                    })();
                    match pair {
                        Ok((m, e)) => worst.record(rel(c(m, 0.0), e), 1e-9, label),
                        Err(e) => worst.error(label(), e),
                    }
                }
            }
        }
    }
    // β_{2,2}(τ, b) moments as products of Euler gamma ratios
    let tau = 1.7;
    let (b0, b1, b2) = (2.9, 0.6, 1.3);
    let b = beta(vec![1.0, tau], vec![b0, b1, b2]);
    let lg = oracle_ln_gamma;
    for k in 1..=3usize {
        let cases = [
            (
                k as f64,
                (0..k)
                    .map(|l| {
                        let l = l as f64;
                        lg((l + b0 + b1) / tau) + lg((l + b0 + b2) / tau) - lg((l + b0) / tau) - lg((l + b0 + b1 + b2) / tau)
                    })
                    .sum::<f64>(),
            ),
            (
                k as f64 * tau,
                (0..k)
                    .map(|l| {
                        let s = l as f64 * tau;
                        lg(s + b0 + b1) + lg(s + b0 + b2) - lg(s + b0) - lg(s + b0 + b1 + b2)
                    })
                    .sum::<f64>(),
            ),
            (
                -(k as f64),
                (0..k)
                    .map(|l| {
                        let s = -(l as f64 + 1.0);
                        lg((s + b0) / tau) + lg((s + b0 + b1 + b2) / tau) - lg((s + b0 + b1) / tau) - lg((s + b0 + b2) / tau)
                    })
                    .sum::<f64>(),
            ),
        ];
        for (q, log) in cases {
            if q <= -b0 {
                continue;
            }
            match b.eta(c(q, 0.0)) {
                Ok(v) => worst.record(rel(v, c(log.exp(), 0.0)), 1e-9, || format!("β22 product form q={q}")),
                Err(e) => worst.error(format!("β22 q={q}"), e),
            }
        }
    }
    worst.finish()
}

// 7 ------------------------------------------------------------------------

fn positivity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = Worst::new();
    let mut smallest = f64::INFINITY;
    for _ in 0..50 {
        let m = rng.random_range(1..=2usize);
        let n = rng.random_range(m + 1..=3usize);
        let b = beta(random_scales(&mut rng, m), random_shifts(&mut rng, n));
        let label = || format!("a={:?} b={:?}", b.params().a(), b.params().b());
        match b.positivity_check() {
            Ok(s) => {
                smallest = smallest.min(s);
                worst.record(if s > 0.0 { 0.0 } else { 1.0 }, 0.5, || format!("S_N L_M(0) = {s} {}", label()));
            }
            Err(e) => worst.error(label(), e),
        }
        for x in [0.1, 1.0, 10.0] {
            match b.laplace_series(0, x) {
                Ok(v) => worst.record(if v > 0.0 { 0.0 } else { 1.0 }, 0.5, || format!("laplace({x}) = {v} {}", label())),
                Err(e) => worst.error(format!("laplace({x}) {}", label()), e),
            }
        }
    }
    worst.finish().map(|s| format!("{s}; min S_N L_M(0) = {smallest:.3e}"))
}

// 8 ------------------------------------------------------------------------

fn ramanujan() -> Check {
    let mut worst = Worst::new();
    let sets = [
        (vec![1.0], vec![1.0, 1.0]),
        (vec![1.0], vec![2.0, 3.0]),
        (vec![0.7], vec![1.4, 0.5, 0.8]),
        (vec![1.0, 1.5], vec![1.8, 0.6, 0.9]),
        (vec![1.2, 0.8], vec![2.2, 0.7, 1.1, 0.5]),
    ];
    for (a, bs) in sets {
        let b = beta(a.clone(), bs.clone());
        for i in 0..a.len() {
            for f in [0.25, 0.5] {
                let q = f * bs[0] / a[i];
                match b.ramanujan_check(i, q) {
                    Ok(r) => worst.record(r.rel_diff, 1e-6, || format!("a={a:?} b={bs:?} i={i} q={q}")),
                    Err(e) => worst.error(format!("a={a:?} b={bs:?} i={i} q={q}"), e),
                }
            }
        }
    }
    worst.finish()
}

// 9 ------------------------------------------------------------------------

const N_SAMPLES: usize = 100_000;

fn draw(params: &BetaParams, seed: u64) -> Result<SampleBatch, String> {
    sample(params, N_SAMPLES, SamplerConfig::with_seed(seed), &quad()).map_err(|e| e.to_string())
}

fn within_sigma(worst: &mut Worst, label: String, got: f64, expected: f64, se: f64) {
    worst.record((got - expected).abs() / se, 3.0, || format!("{label}: {got:.6} vs {expected:.6} (σ = {se:.2e})"));
}

fn sampler() -> Check {
    let mut worst = Worst::new();

    let (b0, b1) = (1.0, 2.0);
    let atom = draw(&BetaParams::probabilistic(vec![], vec![b0, b1]).unwrap(), 91)?;
    let p = b0 / (b0 + b1);
    let freq = atom.values.iter().filter(|v| **v == 1.0).count() as f64 / N_SAMPLES as f64;
    within_sigma(&mut worst, "(a) atom".into(), freq, p, (p * (1.0 - p) / N_SAMPLES as f64).sqrt());

    let b23 = draw(&BetaParams::probabilistic(vec![1.0], vec![2.0, 3.0]).unwrap(), 92)?;
    for (q, exact) in [(1.0, 0.4), (2.0, 0.2)] {
        let (m, se) = b23.empirical_mellin(c(q, 0.0));
        within_sigma(&mut worst, format!("(b) q={q}"), m.re, exact, se);
    }

    let params22 = BetaParams::probabilistic(vec![1.0, 1.5], vec![0.8, 0.6, 1.1]).unwrap();
    let b22 = draw(&params22, 93)?;
    let beta22 = BarnesBeta::new(params22.clone(), quad()).unwrap();
    for q in [0.5, 1.0, 2.0] {
        let (m, se) = b22.empirical_mellin(c(q, 0.0));
        let exact = beta22.eta(c(q, 0.0)).map_err(|e| e.to_string())?.re;
        within_sigma(&mut worst, format!("(c) q={q}"), m.re, exact, se);
    }

    // b_1 = 2 a_1: β_{2,2} equals in law the product of two independent β_{1,1}
    let reducible = BetaParams::probabilistic(vec![1.0, 1.5], vec![0.7, 2.0, 0.9]).unwrap();
    let whole = draw(&reducible, 94)?;
    let factors = reduction_factors(&reducible, 0, 1).map_err(|e| e.to_string())?;
    let mut product = vec![1.0; N_SAMPLES];
    for (k, f) in factors.iter().enumerate() {
        for (x, y) in product.iter_mut().zip(draw(f, 95 + k as u64)?.values) {
            *x *= y;
        }
    }
    for q in [1.0, 2.0] {
        let (m1, s1) = whole.empirical_mellin(c(q, 0.0));
        let (m2, s2) = barnes::empirical_mellin(&product, c(q, 0.0));
        within_sigma(&mut worst, format!("(d) q={q}"), m1.re, m2.re, s1.hypot(s2));
    }
    worst.finish().map(|s| s.replace("worst", "worst |z|"))
}

// 10 -----------------------------------------------------------------------

fn asymptotics() -> Check {
    let mut worst = Worst::new();
    for (a, bs) in [(vec![1.0], vec![1.0, 2.0, 3.0]), (vec![0.8], vec![0.6, 1.1, 0.7])] {
        let b = beta(a.clone(), bs.clone());
        let res = (|| -> barnes::Result<(f64, f64)> { Ok((b.eta(c(1e4, 0.0))?.re, b.atom_probability()?)) })();
        match res {
            Ok((eta, atom)) => worst.record((eta - atom).abs() / atom, 1e-3, || format!("a={a:?} b={bs:?} η(1e4)={eta:.6e} atom={atom:.6e}")),
            Err(e) => worst.error(format!("a={a:?} b={bs:?}"), e),
        }
    }
    for (tau, b1, b2) in [(1.5, 0.6, 1.1), (2.3, 1.2, 0.8)] {
        let b = beta(vec![1.0, tau], vec![0.9, b1, b2]);
        let res = (|| -> barnes::Result<f64> {
            Ok((b.log_eta(c(1e4, 0.0))?.value.re - b.log_eta(c(1e3, 0.0))?.value.re) / 10f64.ln())
        })();
        let expected = -b1 * b2 / tau;
        match res {
            Ok(slope) => worst.record((slope - expected).abs() / expected.abs(), 1e-2, || format!("τ={tau} slope {slope:.6} vs {expected:.6}")),
            Err(e) => worst.error(format!("τ={tau}"), e),
        }
    }
    worst.finish()
}

// 11 -----------------------------------------------------------------------

fn selberg() -> Check {
    let mut worst = Worst::new();
    for (mu, l1, l2) in [(0.5, 0.0, 0.0), (1.2, 0.3, -0.4), (0.25, 1.5, 0.7)] {
        let p = SelbergParams::new(mu, l1, l2, Some(1)).unwrap();
        let exact = (oracle_ln_gamma(1.0 + l1) + oracle_ln_gamma(1.0 + l2) - oracle_ln_gamma(2.0 + l1 + l2)).exp();
        let label = || format!("l=1 μ={mu} λ=({l1},{l2})");
        match (selberg_product(&p), selberg_average_mc(&p, 0, 0)) {
            (Ok(prod), Ok(quadrature)) => {
                worst.record((prod - exact).abs(), 1e-10, || format!("{} product", label()));
                worst.record((quadrature.estimate - exact).abs(), 1e-10, || format!("{} quadrature", label()));
            }
            (Err(e), _) | (_, Err(e)) => worst.error(label(), e),
        }
    }

    let p = SelbergParams::new(0.5, 0.0, 0.0, Some(2)).unwrap();
    let exact = selberg_product(&p).map_err(|e| e.to_string())?;
    let mc = selberg_average_mc(&p, 1_000_000, 11).map_err(|e| e.to_string())?;
    worst.record((mc.estimate - exact).abs() / mc.std_error, 3.0, || {
        format!("l=2 Monte Carlo {:.6} ± {:.2e} vs {exact:.6} (in σ)", mc.estimate, mc.std_error)
    });

    for mu in [0.3, 0.5, 0.9] {
        for (l1, l2) in [(0.0, 0.0), (0.5, 0.2), (-0.1, 1.0)] {
            let p = SelbergParams::new(mu, l1, l2, None).unwrap();
            match moment_checks(&p, &quad()) {
                Ok(checks) => {
                    for ch in checks {
                        worst.record(ch.rel_err, 1e-6, || format!("moment l={} μ={mu} λ=({l1},{l2})", ch.q.re));
                    }
                }
                Err(e) => worst.error(format!("μ={mu} λ=({l1},{l2})"), e),
            }
        }
    }
    worst.finish()
}

// 12 -----------------------------------------------------------------------

fn decomposition() -> Check {
    let mut worst = Worst::new();
    for (mu, l1, l2) in [(0.5, 0.0, 0.0), (0.5, 0.25, 0.5), (1.0, 0.0, 0.3)] {
        let p = SelbergParams::new(mu, l1, l2, None).unwrap();
        let mut qs = decomposition_grid(&p, 13).map_err(|e| e.to_string())?;
        qs.extend([c(0.3, 0.8), c(-0.4, -1.0)]);
        for q in qs {
            let label = || format!("μ={mu} λ=({l1},{l2}) q={q}");
            match decomposition_check(&p, q, &quad()) {
                Ok(ch) => worst.record(ch.rel_err, 1e-6, label),
                Err(e) => worst.error(label(), e),
            }
        }
        if let Err(e) = mellin_m(&p, c(0.0, 0.0), &quad()) {
            worst.error(format!("μ={mu} q=0"), e);
        }
    }
    worst.finish()
}

// 13 -----------------------------------------------------------------------

fn barnes_cli(args: &[&str], dir: &Path) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_barnes"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn cli_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    std::fs::write(d.join("beta.json"), r#"{"a": [1.0, 1.5], "b": [0.8, 0.6, 1.1], "n": 20000, "q": [0.5, [1, 2]]}"#).unwrap();
    for run in ["1", "2"] {
        let (code, _) = barnes_cli(&["sample", "--params", "beta.json", "--seed", "5", "--out", &format!("s{run}.csv")], d)?;
        if code != 0 {
            return Err(format!("sample exited with {code}"));
        }
    }
    let read = |name: &str| std::fs::read(d.join(name)).unwrap();
    if read("s1.csv") != read("s2.csv") || read("s1.csv.json") != read("s2.csv.json") {
        return Err("sample outputs differ between runs".into());
    }
    let first = barnes_cli(&["eval-eta", "--params", "beta.json"], d)?;
    let second = barnes_cli(&["eval-eta", "--params", "beta.json"], d)?;
    if first != second || first.0 != 0 {
        return Err("eval-eta outputs differ between runs".into());
    }
    let start = Instant::now();
    let (code, table) = barnes_cli(&["verify", "--suite", "all"], d)?;
    let rows = String::from_utf8_lossy(&table).lines().count().saturating_sub(1);
    if code != 0 {
        return Err(format!("verify all exited with {code}"));
    }
    Ok(format!("byte-identical reruns; verify all: {rows} checks in {:.1} s", start.elapsed().as_secs_f64()))
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "Γ_1 reduction", budget: Duration::from_secs(1), run: gamma_one_reduction },
        Criterion { id: 2, name: "S_N Bernoulli identities", budget: Duration::from_secs(10), run: bernoulli_identities },
        Criterion { id: 3, name: "functional equation and symmetries", budget: Duration::from_secs(30), run: functional_equation_and_symmetries },
        Criterion { id: 4, name: "method agreement", budget: Duration::from_secs(60), run: method_agreement },
        Criterion { id: 5, name: "closed forms", budget: Duration::from_secs(60), run: closed_forms },
        Criterion { id: 6, name: "moments", budget: Duration::from_secs(60), run: moments },
        Criterion { id: 7, name: "positivity", budget: Duration::from_secs(60), run: positivity },
        Criterion { id: 8, name: "Ramanujan identity", budget: Duration::from_secs(120), run: ramanujan },
        Criterion { id: 9, name: "sampler correctness", budget: Duration::from_secs(300), run: sampler },
        Criterion { id: 10, name: "asymptotics", budget: Duration::from_secs(60), run: asymptotics },
        Criterion { id: 11, name: "Selberg", budget: Duration::from_secs(300), run: selberg },
        Criterion { id: 12, name: "decomposition", budget: Duration::from_secs(120), run: decomposition },
        Criterion { id: 13, name: "CLI determinism", budget: Duration::from_secs(900), run: cli_determinism },
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for criterion in criteria.iter().filter(|c| filter.is_empty() || filter.contains(&c.id)) {
        let start = Instant::now();
        let outcome = (criterion.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > criterion.budget => Err(format!("{detail}; took {elapsed:.1?}, budget {:?}", criterion.budget)),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {} ({elapsed:.2?}): {detail}", criterion.id, criterion.name),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {} ({elapsed:.2?}): {detail}", criterion.id, criterion.name);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
