//! `unfold`: config-driven runner for exact Gaussian-circuit simulation,
//! independence sampling, identity checks and Bloch–Messiah decomposition.

mod config;
mod decompose;
mod matrix;
mod output;
mod sample;
mod simulate;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use unfold_core::verify::Suite;

use config::{ExperimentConfig, Overrides};
use output::Bundle;

#[derive(Parser)]
#[command(name = "unfold", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the exact device distribution, the target and the
    /// factorization residuals.
    Simulate(RunArgs),
    /// Run independence-sampler chains against the exact device distribution.
    Sample(RunArgs),
    /// Run the numerical identity suites.
    Verify(VerifyArgs),
    /// Bloch–Messiah decomposition of a symplectic matrix file.
    Decompose(DecomposeArgs),
}

/// Flags take precedence over the matching config entries.
#[derive(Args)]
struct RunArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Master seed; overrides `sampler.master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Per-source Fock cutoff; overrides `cutoff`.
    #[arg(long)]
    cutoff: Option<u32>,
    /// Retained samples per chain; overrides `sampler.n_samples`.
    #[arg(long)]
    samples: Option<usize>,
    /// Discarded steps per chain; overrides `sampler.burn_in`.
    #[arg(long)]
    burn_in: Option<usize>,
    /// Output directory; overrides `output`.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run (repeatable); all suites when omitted.
    #[arg(long = "suite", value_parser = parse_suite)]
    suites: Vec<Suite>,
    /// Directory for `verify.txt` and `verify.json`.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Symplectic matrix file.
    matrix: PathBuf,
    /// Directory for the factors and the report.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|_| {
        let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite `{s}` (expected one of: {})", names.join(", "))
    })
}

fn load(args: &RunArgs) -> Result<ExperimentConfig> {
    let overrides = Overrides {
        seed: args.seed,
        cutoff: args.cutoff,
        samples: args.samples,
        burn_in: args.burn_in,
        output: args.output.clone(),
    };
    Ok(ExperimentConfig::load(&args.config, &overrides)?)
}

/// Writes the bundle into `dir`, or sends `stream` to stdout and `report`
/// to stderr when no directory is given.
fn emit(bundle: &Bundle, dir: Option<&Path>, stream: &str, report: &str) -> Result<()> {
    match dir {
        Some(dir) => {
            for path in bundle.write_to(dir)? {
                println!("wrote {}", path.display());
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bundle.get(stream).unwrap_or_default())?;
            out.flush()?;
            eprint!("{}", String::from_utf8_lossy(bundle.get(report).unwrap_or_default()));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate(args) => {
            let cfg = load(&args)?;
            let bundle = simulate::simulate(&cfg)?;
            emit(&bundle, cfg.output.as_deref(), "distribution.jsonl", "report.txt")?;
            Ok(true)
        }
        Command::Sample(args) => {
            let cfg = load(&args)?;
            let bundle = sample::sample(&cfg)?;
            emit(&bundle, cfg.output.as_deref(), "samples.jsonl", "summary.txt")?;
            Ok(true)
        }
        Command::Verify(args) => {
            let overrides = match std::env::var(verify::TOLERANCE_ENV) {
                Ok(spec) => verify::parse_overrides(&spec)?,
                Err(std::env::VarError::NotPresent) => Default::default(),
                Err(e) => return Err(e).context(verify::TOLERANCE_ENV),
            };
            let (bundle, passed) = verify::verify(&args.suites, &overrides)?;
            print!(
                "{}",
                String::from_utf8_lossy(bundle.get("verify.txt").unwrap_or_default())
            );
            if let Some(dir) = &args.output {
                bundle.write_to(dir)?;
            }
            Ok(passed)
        }
        Command::Decompose(args) => {
            let bundle = decompose::decompose(&args.matrix)?;
            print!(
                "{}",
                String::from_utf8_lossy(bundle.get("report.txt").unwrap_or_default())
            );
            if let Some(dir) = &args.output {
                bundle.write_to(dir)?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
