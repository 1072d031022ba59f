//! Command-line driver: sampling, coverings, detection, sweeps, heatmaps, rate
//! checks, tail supports and box-counting, configured by a JSON file.

mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::Outcome;
use config::Format;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Infeasible(String),
    Other(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Infeasible(_) => "infeasible",
            CliError::Other(_) => "runtime",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Infeasible(m) | CliError::Other(m) => m,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Other(_) => 1,
        }
    }
}

impl From<zeroset::Error> for CliError {
    fn from(e: zeroset::Error) -> Self {
        use zeroset::Error as E;
        match e {
            E::Io(_) | E::Csv(_) | E::NormalizationCheck { .. } | E::EnvelopeViolated { .. } => {
                CliError::Other(e.to_string())
            }
            e if e.is_infeasibility() => CliError::Infeasible(e.to_string()),
            e => CliError::Validation(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "zeroset",
    version,
    about = "Detect lower-dimensional zero-density regions with ball coverings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory receiving every output file
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads; defaults to all cores
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides the payload seed (base_seed for sweeps)
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Draw points from a catalog density
    Sample,
    /// Classify the balls of a grid covering
    Cover,
    /// One detection trial with occupancy and reconstruction
    Detect,
    /// Filled-fraction sweep over n, M_r and M_eps
    Sweep,
    /// Bin occupancy of 1-D densities
    Heatmap,
    /// Rate-condition checks
    Rates {
        #[command(subcommand)]
        action: RatesAction,
    },
    /// (1 - delta)-support schedule for a tail density
    TailSupport,
    /// Box-counting dimension of a zero set
    Boxdim,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum RatesAction {
    /// Evaluate conditions A and B
    Check,
}

const DEFAULT_OUTPUT_DIR: &str = "zeroset-output";

fn diag(value: serde_json::Value) {
    eprintln!("{value}");
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = config::load(cli.config.as_deref())?;
    let format = cli.format.or(cfg.format);
    let threads = cli.threads.or(cfg.threads);
    if threads == Some(0) {
        return Err(CliError::Validation("threads must be at least 1".into()));
    }
    let output_dir = cli
        .output_dir
        .or(cfg.output_dir)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
    let seed = cli.seed.or(cfg.seed);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Other(e.to_string()))?;

    let outcome: Outcome = pool.install(|| match cli.command {
        Command::Sample => {
            let mut a = cfg.sample.unwrap_or_default();
            a.seed = seed.unwrap_or(a.seed);
            commands::sample_cmd(a, format)
        }
        Command::Cover => commands::cover_cmd(cfg.cover.unwrap_or_default(), format),
        Command::Detect => {
            let mut a = cfg.detect.unwrap_or_default();
            a.seed = seed.unwrap_or(a.seed);
            commands::detect_cmd(a, format)
        }
        Command::Sweep => {
            let mut a = cfg
                .sweep
                .unwrap_or_else(|| zeroset::experiments::SweepConfig::reference(50, 0));
            a.base_seed = seed.unwrap_or(a.base_seed);
            commands::sweep_cmd(a, format)
        }
        Command::Heatmap => {
            let mut a = cfg.heatmap.unwrap_or_default();
            a.seed = seed.unwrap_or(a.seed);
            commands::heatmap_cmd(a, format)
        }
        Command::Rates {
            action: RatesAction::Check,
        } => commands::rates_cmd(cfg.rates_check.unwrap_or_default(), format),
        Command::TailSupport => commands::tail_support_cmd(cfg.tail_support.unwrap_or_default(), format),
        Command::Boxdim => commands::boxdim_cmd(cfg.boxdim.unwrap_or_default(), format),
    })?;

    write_artifacts(&output_dir, &outcome)?;
    if let Some(line) = outcome.stdout {
        println!("{line}");
    }
    Ok(())
}

fn write_artifacts(dir: &Path, outcome: &Outcome) -> Result<(), CliError> {
    let io = |e: std::io::Error, p: &Path| CliError::Other(format!("{}: {e}", p.display()));
    std::fs::create_dir_all(dir).map_err(|e| io(e, dir))?;
    for a in &outcome.artifacts {
        let path = dir.join(&a.name);
        std::fs::write(&path, &a.bytes).map_err(|e| io(e, &path))?;
        diag(json!({ "level": "info", "event": "wrote", "path": path.display().to_string(), "bytes": a.bytes.len() }));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.kind().to_string();
            let detail = e.to_string();
            let first = detail
                .lines()
                .next()
                .unwrap_or(&msg)
                .trim_start_matches("error: ")
                .to_string();
            diag(json!({ "level": "error", "kind": "validation", "message": first }));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            diag(json!({ "level": "error", "kind": e.kind(), "message": e.message() }));
            ExitCode::from(e.exit_code())
        }
    }
}
