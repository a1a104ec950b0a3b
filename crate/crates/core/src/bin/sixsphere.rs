use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sixsphere::cli::{error_exit_code, run, Command, Mode, RunConfig};
use sixsphere::json::to_canonical_string;

#[derive(Parser)]
#[command(name = "sixsphere", version, about = "Exact checks for the nearly Kähler six-sphere")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// exact (rationals) or float.
    #[arg(long, global = true, default_value = "exact")]
    mode: String,
    /// Float tolerance; float mode only.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Number of random samples or trials.
    #[arg(long, global = true, default_value_t = 0)]
    samples: usize,
    /// Required when --samples > 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON input document.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Worker threads; reports do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Sub {
    /// d² = 0, the invariant form identities and the Frobenius system.
    VerifyStructure {
        /// Perturb one structure constant.
        #[arg(long)]
        mutate: Option<String>,
    },
    /// Split, elliptic or degenerate type of a 3-form on R⁶.
    #[command(name = "classify-3form")]
    Classify3Form,
    /// dω = 3 Im Υ, elliptic definiteness and the Nijenhuis tensor on S⁶.
    SphereSuite,
    /// (r, s), the residual det s̄ − det r and the signature of H.
    Chern {
        /// standard, minus-standard or remark1.
        #[arg(long)]
        family: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mode: Mode = match cli.mode.parse() {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let (command, mutate, family) = match cli.command {
        Sub::VerifyStructure { mutate } => (Command::VerifyStructure, mutate, None),
        Sub::Classify3Form => (Command::Classify3Form, None, None),
        Sub::SphereSuite => (Command::SphereSuite, None, None),
        Sub::Chern { family } => (Command::Chern, None, family),
    };
    let config = RunConfig {
        command,
        input: cli.input,
        mode,
        tol: cli.tol,
        samples: cli.samples,
        seed: cli.seed,
        report: cli.report,
        threads: cli.threads,
        mutate,
        family,
    };
    match run(&config) {
        Ok(outcome) => {
            for line in &outcome.lines {
                eprintln!("{line}");
            }
            if config.report.is_none() {
                print!("{}", to_canonical_string(&outcome.report));
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
