//! Command-line front end for `symcost-core`: reads a JSON experiment
//! config, runs one command and writes a CSV (or JSON) table.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use table::{Cell, Kind, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Relative entropy of frameness, closed form and variational.
    Ref,
    /// Residual asymmetry against ensemble rate.
    Sweep,
    /// Entropy chain of the converse bound on a concrete ensemble.
    Audit,
    /// Operator Chernoff sampling experiment.
    Chernoff,
    /// Typical-set mass and cardinality.
    Typical,
    /// Per-copy REF under the collective twirl.
    Collective,
}

#[derive(Debug, Parser)]
#[command(name = "symcost", version, about = "Asymmetry measures and randomized symmetrization experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment config (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides the config dimension cap.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads for trials and batches (output does not depend on it).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

pub fn dispatch(command: Command, cfg: &ExperimentConfig) -> Result<Table> {
    match command {
        Command::Ref => commands::cmd_ref(cfg),
        Command::Sweep => commands::cmd_sweep(cfg),
        Command::Audit => commands::cmd_audit(cfg),
        Command::Chernoff => commands::cmd_chernoff(cfg),
        Command::Typical => commands::cmd_typical(cfg),
        Command::Collective => commands::cmd_collective(cfg),
    }
}

pub fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Structured => table.to_structured(),
    }
}

/// Loads the config, applies flag overrides and runs the command.
pub fn run(cli: &Cli) -> Result<String> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::field("--config", "a config file is required"))?;
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    if cli.cap.is_some() {
        cfg.cap = cli.cap;
    }
    let table = match cli.jobs {
        Some(0) => return Err(CliError::field("--jobs", "must be at least 1")),
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::field("--jobs", e))?
            .install(|| dispatch(cli.command, &cfg))?,
        None => dispatch(cli.command, &cfg)?,
    };
    let output = render(&table, cli.format);
    if let Some(out) = &cli.out {
        std::fs::write(out, &output).map_err(|source| CliError::Io {
            path: out.display().to_string(),
            source,
        })?;
        return Ok(String::new());
    }
    Ok(output)
}
