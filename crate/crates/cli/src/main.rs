//! `lexevo`: run the analysis pipeline, or one stage of it, from a
//! configuration file.
//!
//! Exit status is 0 on success, 1 for invalid configuration, arguments or a
//! missing upstream stage, 2 for data errors and 3 for I/O failures. Logs go
//! to standard error; results only to files in the output directory.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lexevo::{Error, Pipeline, RunConfig, Stage};

#[derive(Debug, Parser)]
#[command(name = "lexevo", version, about = "Diachronic vocabulary analysis of bibliographic corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every stage in order.
    Run(Common),
    /// Parse, filter and tokenize the corpus; build the vocabulary and matrix.
    Ingest(Common),
    /// Term frequencies, publications per year, type shares and trend fit.
    Stats(Common),
    /// Correspondence analysis with years as supplementary points.
    Ca(Common),
    /// Per-period characteristic terms and most-cited documents.
    Periods(Common),
    /// Render every SVG figure.
    Figures(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Configuration file (`key = value` lines).
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Output directory holding artifacts and cached stage outputs.
    #[arg(long, short, default_value = "lexevo-out")]
    out: PathBuf,
    /// Seed for randomized layout; overrides the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Input CSV; overrides the configuration.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Override any configuration key, e.g. `--set min_term_frequency=3`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// More log output; repeat for debug detail.
    #[arg(long, short, action = clap::ArgAction::Count)]
    verbose: u8,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, Error> {
        let cwd = Path::new(".");
        let mut config = match (&self.config, &self.input) {
            (Some(path), _) => RunConfig::from_file(path)?,
            (None, Some(input)) => RunConfig::with_input(input),
            (None, None) => return Err(Error::Config("pass --config or --input".into())),
        };
        if let Some(input) = &self.input {
            config.input = input.clone();
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        for item in &self.overrides {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got `{item}`")))?;
            config.set(key.trim(), value.trim(), cwd)?;
        }
        Ok(config)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stage, common) = match &cli.command {
        Command::Run(c) => (None, c),
        Command::Ingest(c) => (Some(Stage::Ingest), c),
        Command::Stats(c) => (Some(Stage::Stats), c),
        Command::Ca(c) => (Some(Stage::Ca), c),
        Command::Periods(c) => (Some(Stage::Periods), c),
        Command::Figures(c) => (Some(Stage::Figures), c),
    };
    let level = match common.verbose {
        0 => "info",
        1 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    let pipeline = match common.resolve().and_then(|cfg| Pipeline::new(cfg, &common.out)) {
        Ok(p) => p,
        Err(e) => {
            log::error!("{e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let outcome = match stage {
        None => pipeline.run_all(),
        Some(s) => pipeline.run_stage(s),
    };
    match outcome {
        Ok(_) => {
            log::info!("done; artifacts in {}", pipeline.out_dir().display());
            ExitCode::SUCCESS
        }
        Err(failure) => {
            log::error!("{failure}");
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
