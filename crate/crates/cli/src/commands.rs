use std::path::Path;

use barnes::{
    log_gamma_m_eval, BarnesBeta, EtaMethod, MomentSign, QuadratureSpec, SampleBatch, Sampler, SamplerConfig, ShintaniVariant,
};
use num_complex::Complex64;
use serde_json::json;

use crate::config::{CliError, CliResult, Grid, ParamsFile};
use crate::table::{json_text, Cell, Format, Table};

fn complex_columns(grid: &Grid, arg: &str, values: &[&str]) -> Vec<String> {
    if grid.real {
        std::iter::once(arg.to_owned()).chain(values.iter().map(|v| v.to_string())).collect()
    } else {
        std::iter::once(arg)
            .chain(values.iter().copied())
            .flat_map(|name| [format!("{name}_re"), format!("{name}_im")])
            .collect()
    }
}

fn complex_cells(grid: &Grid, values: &[Complex64]) -> Vec<Cell> {
    if grid.real {
        values.iter().map(|z| Cell::Num(z.re)).collect()
    } else {
        values.iter().flat_map(|z| [Cell::Num(z.re), Cell::Num(z.im)]).collect()
    }
}

pub fn eval_gamma(file: &ParamsFile, quad: &QuadratureSpec) -> CliResult<Table> {
    let gamma = file.gamma()?;
    let grid = file.grid("w")?;
    let mut table = Table::new(complex_columns(&grid, "w", &["log_gamma", "gamma"]));
    for &w in &grid.points {
        let log = log_gamma_m_eval(&gamma, w, quad)?.value;
        // on the real axis Γ_M is real, while its logarithm may carry iπk
        let value = log.exp();
        let log = if grid.real { Complex64::new(log.re, 0.0) } else { log };
        table.push(complex_cells(&grid, &[w, log, value]));
    }
    Ok(table)
}

pub fn eval_eta(file: &ParamsFile, quad: &QuadratureSpec) -> CliResult<Table> {
    let beta = BarnesBeta::new(file.beta()?, *quad)?;
    let grid = file.grid("q")?;
    let method = file.get::<EtaMethod>("method")?.unwrap_or(EtaMethod::DirectSn);
    let variant = match file.get::<u8>("variant")? {
        Some(v) => Some(ShintaniVariant::from_index(v).ok_or_else(|| CliError::Config(format!("variant must be 1, 2 or 3, got {v}")))?),
        None => None,
    };
    let i = file.get::<usize>("i")?.unwrap_or(0);
    let j = file.get::<usize>("j")?;
    let mut table = Table::new(complex_columns(&grid, "q", &["eta"]));
    for &q in &grid.points {
        let value = match (method, variant) {
            (EtaMethod::ShintaniK, Some(variant)) => beta.shintani_product(q, variant, i, j)?.value,
            _ => beta.mellin_eta(q, method)?.value,
        };
        table.push(complex_cells(&grid, &[q, value]));
    }
    Ok(table)
}

pub fn moments(file: &ParamsFile, quad: &QuadratureSpec) -> CliResult<Table> {
    let beta = BarnesBeta::new(file.beta()?, *quad)?;
    let i = file.get::<usize>("i")?.unwrap_or(0);
    let sign = file.get::<MomentSign>("sign")?.unwrap_or(MomentSign::Positive);
    let ks: Vec<usize> = file.require("k")?;
    let mut table = Table::new(["k", "moment"]);
    for k in ks {
        table.push(vec![k.into(), beta.integer_moment(i, k, sign)?.into()]);
    }
    Ok(table)
}

pub fn laplace(file: &ParamsFile, quad: &QuadratureSpec) -> CliResult<Table> {
    let beta = BarnesBeta::new(file.beta()?, *quad)?;
    let i = file.get::<usize>("i")?.unwrap_or(0);
    let xs = file.grid("x")?.reals("x")?;
    let mut table = Table::new(["x", "value", "truncation_bound"]);
    for x in xs {
        let v = beta.laplace_series_eval(i, x)?;
        table.push(vec![x.into(), v.value.into(), v.truncation_bound.into()]);
    }
    Ok(table)
}

pub fn sample(file: &ParamsFile, quad: &QuadratureSpec, seed: u64) -> CliResult<SampleBatch> {
    let params = file.beta()?;
    let n: usize = file.require("n")?;
    let defaults = SamplerConfig::default();
    let config = SamplerConfig {
        seed,
        epsilon: file.get("epsilon")?.unwrap_or(defaults.epsilon),
        nodes: file.get("nodes")?.unwrap_or(defaults.nodes),
        batch_size: file.get("batch_size")?.unwrap_or(defaults.batch_size),
    };
    let sampler = Sampler::new(&params, config, quad).map_err(|e| match e {
        barnes::Error::ConfigError(msg) => CliError::Config(msg),
        other => other.into(),
    })?;
    Ok(sampler.sample(n)?)
}

pub fn write_sample(batch: &SampleBatch, format: Format, out: Option<&Path>) -> CliResult<()> {
    match (format, out) {
        (Format::Csv, Some(path)) => batch.export(path)?,
        (Format::Csv, None) => crate::table::emit(&batch.to_csv(), None)?,
        (Format::Json, out) => {
            let text = json_text(&json!({ "meta": batch.metadata_json(), "values": batch.values }));
            crate::table::emit(&text, out)?
        }
    }
    Ok(())
}

pub fn selberg(file: &ParamsFile, quad: &QuadratureSpec, seed: u64) -> CliResult<(Table, serde_json::Value)> {
    let p = file.selberg()?;
    let samples = file.get::<usize>("mc_samples")?.unwrap_or(0);
    let qs = if file.has("q") {
        file.grid("q")?.points
    } else {
        barnes::selberg::decomposition_grid(&p, 5)?
    };
    let report = barnes::selberg_report(&p, samples, seed, &qs, quad)?;
    let mut table = Table::new(["q_re", "q_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_err"]);
    for c in &report.mellin_checks {
        table.push(vec![
            c.q.re.into(),
            c.q.im.into(),
            c.lhs.re.into(),
            c.lhs.im.into(),
            c.rhs.re.into(),
            c.rhs.im.into(),
            c.rel_err.into(),
        ]);
    }
    let json = serde_json::to_value(&report).expect("report serializes");
    Ok((table, json))
}
