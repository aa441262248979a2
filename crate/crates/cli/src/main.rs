mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use config::{Format, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "pdo",
    version,
    about = "Exact algebra of commuting partial differential operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pairwise commutators of operators.
    Commute(commands::CommuteArgs),
    /// Spectral data of a commutative ring of operators.
    Analyze(commands::AnalyzeArgs),
    /// Filtrations, rank, stability and witnesses of a pair (A, W).
    Schur(commands::SchurArgs),
    /// The subalgebra R + I of k[x,h].
    Glue(commands::GlueArgs),
    /// Cohen-Macaulay closure of a subalgebra of k[x,h].
    Cm(commands::CmArgs),
    /// Weil cycle of a rational function in x, h.
    Cycle(commands::CycleArgs),
    /// Runs the acceptance checks.
    Selftest(commands::SelftestArgs),
}

/// What a command produced.
pub struct Report {
    /// `false` when the computation finished with a negative answer.
    pub positive: bool,
    pub result: Value,
    pub text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let cfg = &cli.config;
    cfg.validate()?;
    let (name, outcome) = match &cli.command {
        Command::Commute(a) => ("commute", commands::commute(a, cfg)),
        Command::Analyze(a) => ("analyze", commands::analyze(a, cfg)),
        Command::Schur(a) => ("schur", commands::schur(a, cfg)),
        Command::Glue(a) => ("glue", commands::glue(a, cfg)),
        Command::Cm(a) => ("cm", commands::cm(a, cfg)),
        Command::Cycle(a) => ("cycle", commands::cycle(a, cfg)),
        Command::Selftest(a) => ("selftest", commands::selftest(a, cfg)),
    };
    let report = match outcome {
        Ok(r) => r,
        Err(e) => match e.downcast_ref::<pdo_core::Error>() {
            Some(core) if core.is_negative_outcome() => Report {
                positive: false,
                result: json!({ "reason": core.to_string() }),
                text: format!("negative: {core}\n"),
            },
            _ => return Err(e),
        },
    };
    let body = match cfg.format {
        Format::Json => {
            let envelope = json!({
                "pdo_version": env!("CARGO_PKG_VERSION"),
                "command": name,
                "status": if report.positive { "ok" } else { "negative" },
                "config": cfg,
                "result": report.result,
            });
            serde_json::to_string_pretty(&envelope)? + "\n"
        }
        Format::Text => report.text,
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(if report.positive {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
