//! `barnes`: batch evaluation, sampling and identity checks for Barnes beta
//! distributions and the Selberg integral.

mod commands;
mod config;
mod table;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{CliError, CliResult, ParamsFile};
use table::{emit, json_text, Format};
use verify::Suite;

#[derive(Debug, Parser)]
#[command(name = "barnes", version, about = "Barnes multiple gamma, Barnes beta and Selberg integral tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON parameter file.
    #[arg(long, global = true, value_name = "FILE")]
    params: Option<PathBuf>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Defaults to json for `.json` outputs and csv otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Absolute and relative quadrature tolerance.
    #[arg(long, global = true, value_name = "REAL")]
    tol: Option<f64>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Γ_M(w | a) on a grid of w.
    EvalGamma,
    /// η_{M,N}(q | a, b) on a grid of q.
    EvalEta,
    /// Integer moments E[β^{±k a_i}].
    Moments,
    /// The Laplace transform E[exp(-x β^{-a_i})].
    Laplace,
    /// Draws from β_{M,N}(a, b).
    Sample,
    /// Runs identity suites and exits with 1 on any failure.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Selberg product, Monte Carlo average and Mellin checks.
    Selberg,
}

fn run(cli: Cli) -> CliResult<bool> {
    let file = match &cli.params {
        Some(path) => ParamsFile::load(path)?,
        None if matches!(cli.command, Command::Verify { .. }) => ParamsFile::empty(),
        None => return Err(CliError::Config("--params is required".into())),
    };
    let format = cli.format.unwrap_or(match cli.out.as_ref().and_then(|p| p.extension()) {
        Some(ext) if ext == "json" => Format::Json,
        _ => Format::Csv,
    });
    let out = cli.out.as_deref();
    let quad = file.quadrature(cli.tol)?;
    let table = match cli.command {
        Command::EvalGamma => commands::eval_gamma(&file, &quad)?,
        Command::EvalEta => commands::eval_eta(&file, &quad)?,
        Command::Moments => commands::moments(&file, &quad)?,
        Command::Laplace => commands::laplace(&file, &quad)?,
        Command::Sample => {
            let batch = commands::sample(&file, &quad, cli.seed)?;
            commands::write_sample(&batch, format, out)?;
            return Ok(true);
        }
        Command::Verify { suite } => {
            let report = verify::run(suite, &file, &quad)?;
            emit(&report.table.render(format), out)?;
            if report.failures > 0 {
                eprintln!("{} check(s) failed", report.failures);
            }
            return Ok(report.failures == 0);
        }
        Command::Selberg => {
            let (table, json) = commands::selberg(&file, &quad, cli.seed)?;
            let text = match format {
                Format::Json => json_text(&json),
                Format::Csv => table.render(Format::Csv),
            };
            emit(&text, out)?;
            return Ok(true);
        }
    };
    emit(&table.render(format), out)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
