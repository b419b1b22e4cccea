//! Identity suites behind `barnes verify`.

use barnes::selberg::{decomposition_check, decomposition_grid, moment_checks};
use barnes::{
    reduction_factors, s_bernoulli, BarnesBeta, BetaParams, EtaMethod, QuadratureSpec,
    SelbergParams, ShintaniVariant,
};
use clap::ValueEnum;
use num_complex::Complex64;

use crate::config::{CliResult, ParamsFile};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    FunctionalEquation,
    Symmetries,
    Shintani,
    Bernoulli,
    Reduction,
    Ramanujan,
    SelbergDecomposition,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::FunctionalEquation => "functional-equation",
            Suite::Symmetries => "symmetries",
            Suite::Shintani => "shintani",
            Suite::Bernoulli => "bernoulli",
            Suite::Reduction => "reduction",
            Suite::Ramanujan => "ramanujan",
            Suite::SelbergDecomposition => "selberg-decomposition",
            Suite::All => "all",
        }
    }

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::FunctionalEquation,
                Suite::Symmetries,
                Suite::Shintani,
                Suite::Bernoulli,
                Suite::Reduction,
                Suite::Ramanujan,
                Suite::SelbergDecomposition,
            ],
            s => vec![s],
        }
    }
}

/// Rows of `suite, case, residual, threshold, status`.
pub struct Report {
    pub table: Table,
    pub failures: usize,
}

struct Recorder<'a> {
    suite: &'static str,
    table: &'a mut Table,
    failures: &'a mut usize,
}

impl Recorder<'_> {
    fn check(&mut self, case: String, residual: barnes::Result<f64>, threshold: f64) {
        let (residual, case) = match residual {
            Ok(r) => (r, case),
            Err(e) => (f64::INFINITY, format!("{case}: {e}").replace(", ", "; ")),
        };
        let pass = residual < threshold;
        if !pass {
            *self.failures += 1;
        }
        self.table.push(vec![
            self.suite.into(),
            case.into(),
            Cell::Num(residual),
            Cell::Num(threshold),
            if pass { "pass" } else { "fail" }.into(),
        ]);
    }

    fn skip(&mut self, case: String) {
        self.table.push(vec![self.suite.into(), case.into(), Cell::Num(0.0), Cell::Num(0.0), "skip".into()]);
    }
}

fn list(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(" "))
}

// cases stay free of ", " so that CSV rows split cleanly
fn label(p: &BetaParams) -> String {
    format!("M={} N={} a={} b={}", p.m(), p.n(), list(p.a()), list(p.b()))
}

fn rel(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / rhs.norm()
}

fn default_sets() -> Vec<BetaParams> {
    [
        (vec![1.3], vec![0.7, 1.1]),
        (vec![0.8], vec![1.2, 0.5, 0.9]),
        (vec![1.0, 1.7], vec![0.6, 0.8, 1.3]),
        (vec![1.2, 0.9], vec![0.9, 0.4, 1.1, 0.7]),
    ]
    .into_iter()
    .map(|(a, b)| BetaParams::probabilistic(a, b).expect("valid default parameters"))
    .collect()
}

fn q_grid() -> [Complex64; 4] {
    [
        Complex64::new(0.35, 0.0),
        Complex64::new(1.7, 0.0),
        Complex64::new(0.5, 1.2),
        Complex64::new(-0.2, -0.6),
    ]
}

struct Context {
    sets: Vec<BetaParams>,
    selberg: Vec<SelbergParams>,
    quad: QuadratureSpec,
}

fn functional_equation(ctx: &Context, rec: &mut Recorder) -> barnes::Result<()> {
    for p in &ctx.sets {
        let beta = BarnesBeta::new(p.clone(), ctx.quad)?;
        for i in 0..p.m() {
            for q in q_grid() {
                let residual = (|| {
                    let lhs = beta.eta(q + p.a()[i])?;
                    let rhs = beta.functional_equation_rhs(q, i)?;
                    Ok((lhs - rhs).norm() / rhs.norm().max(1.0))
                })();
                rec.check(format!("{} i={i} q={q}", label(p)), residual, 1e-9);
            }
        }
    }
    Ok(())
}

fn symmetries(ctx: &Context, rec: &mut Recorder) -> barnes::Result<()> {
    const NAMES: [&str; 5] = ["b0-shift", "n-reduction", "fe-variant", "bj-plus-ai", "mixed"];
    for p in &ctx.sets {
        let beta = BarnesBeta::new(p.clone(), ctx.quad)?;
        if p.m() == 0 || p.n() == 0 {
            rec.skip(format!("{}: needs M ≥ 1 and N ≥ 1", label(p)));
            continue;
        }
        for q in [Complex64::new(0.45, 0.0), Complex64::new(0.3, 0.9)] {
            let mut pairs = vec![(0, 1), (p.m() - 1, p.n())];
            pairs.dedup();
            for (i, j) in pairs {
                match beta.symmetry_residuals(q, 0.6, i, j) {
                    Ok(residuals) => {
                        for (name, r) in NAMES.iter().zip(residuals) {
                            rec.check(format!("{} {name} i={i} j={j} q={q}", label(p)), Ok(r), 1e-9);
                        }
                    }
                    Err(e) => rec.check(format!("{} i={i} j={j} q={q}", label(p)), Err(e), 1e-9),
                }
            }
        }
    }
    Ok(())
}

fn shintani(ctx: &Context, rec: &mut Recorder) -> barnes::Result<()> {
    for p in &ctx.sets {
        if p.m() == 0 || p.m() > p.n() {
            rec.skip(format!("{}: needs 1 ≤ M ≤ N", label(p)));
            continue;
        }
        let beta = BarnesBeta::new(p.clone(), ctx.quad)?;
        for q in [Complex64::new(0.6, 0.0), Complex64::new(-0.1, 0.7)] {
            let direct = beta.mellin_eta(q, EtaMethod::DirectSn)?.value;
            let levy = beta.mellin_eta(q, EtaMethod::LevyIntegral).map(|v| rel(v.value, direct));
            rec.check(format!("{} levy q={q}", label(p)), levy, 1e-6);
            for (variant, j) in [
                (ShintaniVariant::Shifted, None),
                (ShintaniVariant::Ratio, None),
                (ShintaniVariant::Reduced, Some(1)),
            ] {
                let got = beta.shintani_product(q, variant, 0, j).map(|v| rel(v.value, direct));
                rec.check(format!("{} {variant:?} q={q}", label(p)), got, 1e-6);
            }
        }
    }
    Ok(())
}

fn bernoulli(ctx: &Context, rec: &mut Recorder) -> barnes::Result<()> {
    for p in &ctx.sets {
        // S_N B_N(q) = f(0) N! b_1 ... b_N
        let target = p.gamma().f_at_zero() * (1..=p.n()).map(|k| k as f64).product::<f64>() * p.b()[1..].iter().product::<f64>();
        for q in [Complex64::new(0.3, 0.0), Complex64::new(-0.7, 1.1)] {
            for n in 0..=p.n() {
                let residual = s_bernoulli(p.gamma(), p.b(), n, q, &ctx.quad).map(|(value, scale)| {
                    if n < p.n() {
                        value.norm() / scale.max(f64::MIN_POSITIVE)
                    } else {
                        (value - target).norm() / target.abs()
                    }
                });
                rec.check(format!("{} n={n} q={q}", label(p)), residual, 1e-9);
            }
        }
    }
    Ok(())
}

fn multiple_pairs(p: &BetaParams) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..p.m() {
        for j in 1..=p.n() {
            if reduction_factors(p, i, j).is_ok() {
                out.push((i, j));
            }
        }
    }
    out
}

fn reduction(ctx: &Context, rec: &mut Recorder) -> barnes::Result<()> {
    let mut sets: Vec<BetaParams> = ctx.sets.iter().filter(|p| !multiple_pairs(p).is_empty()).cloned().collect();
    if sets.is_empty() {
        sets = vec![
            BetaParams::probabilistic(vec![1.0, 1.5], vec![0.7, 2.0, 0.9])?,
            BetaParams::probabilistic(vec![0.5], vec![1.0, 1.5])?,
        ];
    }
    for p in &sets {
        let beta = BarnesBeta::new(p.clone(), ctx.quad)?;
        for (i, j) in multiple_pairs(p) {
            let factors = reduction_factors(p, i, j)?;
            for q in [Complex64::new(0.8, 0.0), Complex64::new(0.2, -0.9)] {
                let residual = (|| {
                    let mut log = Complex64::new(0.0, 0.0);
                    for f in &factors {
                        log += BarnesBeta::new(f.clone(), ctx.quad)?.log_eta(q)?.value;
                    }
                    Ok(rel(log.exp(), beta.eta(q)?))
                })();
                rec.check(format!("{} i={i} j={j} q={q}", label(p)), residual, 1e-9);
            }
        }
    }
    Ok(())
}

fn ramanujan(ctx: &Context, rec: &mut Recorder) -> barnes::Result<()> {
    let defaults = [
        (vec![1.0], vec![1.0, 1.0]),
        (vec![1.0], vec![2.0, 3.0]),
        (vec![1.3], vec![0.7, 1.1]),
    ];
    let sets: Vec<BetaParams> = if ctx.sets.len() == 1 {
        ctx.sets.clone()
    } else {
        defaults
            .into_iter()
            .map(|(a, b)| BetaParams::probabilistic(a, b))
            .collect::<barnes::Result<_>>()?
    };
    for p in &sets {
        if p.m() == 0 || p.mode() != barnes::Mode::Probabilistic {
            rec.skip(format!("{}: needs M ≥ 1 in probabilistic mode", label(p)));
            continue;
        }
        let beta = BarnesBeta::new(p.clone(), ctx.quad)?;
        let i = 0;
        for fraction in [0.25, 0.5] {
            let q = fraction * p.b0() / p.a()[i];
            rec.check(format!("{} i={i} q={q}", label(p)), beta.ramanujan_check(i, q).map(|c| c.rel_diff), 1e-6);
        }
    }
    Ok(())
}

fn selberg_decomposition(ctx: &Context, rec: &mut Recorder) -> barnes::Result<()> {
    for p in &ctx.selberg {
        let name = format!("mu={} lambda1={} lambda2={}", p.mu, p.lambda1, p.lambda2);
        for c in moment_checks(p, &ctx.quad)? {
            rec.check(format!("{name} moment l={}", c.q.re), Ok(c.rel_err), 1e-6);
        }
        let mut qs = decomposition_grid(p, 13)?;
        qs.extend([Complex64::new(0.3, 0.8), Complex64::new(-0.4, -1.0)]);
        for q in qs {
            rec.check(format!("{name} q={q}"), decomposition_check(p, q, &ctx.quad).map(|c| c.rel_err), 1e-6);
        }
    }
    Ok(())
}

pub fn run(suite: Suite, file: &ParamsFile, quad: &QuadratureSpec) -> CliResult<Report> {
    let sets = if file.has("b") { vec![file.beta()?] } else { default_sets() };
    let selberg = if file.has("mu") {
        vec![file.selberg()?]
    } else {
        [(0.5, 0.0, 0.0), (0.5, 0.25, 0.5), (1.0, 0.0, 0.3)]
            .into_iter()
            .map(|(mu, l1, l2)| SelbergParams::new(mu, l1, l2, None))
            .collect::<barnes::Result<_>>()?
    };
    let ctx = Context { sets, selberg, quad: *quad };
    let mut table = Table::new(["suite", "case", "residual", "threshold", "status"]);
    let mut failures = 0;
    for s in suite.members() {
        let mut rec = Recorder {
            suite: s.name(),
            table: &mut table,
            failures: &mut failures,
        };
        let outcome = match s {
            Suite::FunctionalEquation => functional_equation(&ctx, &mut rec),
            Suite::Symmetries => symmetries(&ctx, &mut rec),
            Suite::Shintani => shintani(&ctx, &mut rec),
            Suite::Bernoulli => bernoulli(&ctx, &mut rec),
            Suite::Reduction => reduction(&ctx, &mut rec),
            Suite::Ramanujan => ramanujan(&ctx, &mut rec),
            Suite::SelbergDecomposition => selberg_decomposition(&ctx, &mut rec),
            Suite::All => unreachable!("expanded by members"),
        };
        if let Err(e) = outcome {
            rec.check("setup".into(), Err(e), 0.0);
        }
    }
    Ok(Report { table, failures })
}
