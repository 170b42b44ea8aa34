//! Experiment runner behind the `ctdt` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::fs;
use std::path::PathBuf;

use clap::Parser;

use crate::commands::Context;
use crate::config::{ExperimentConfig, Kind, SCHEMA_VERSION};
pub use crate::error::CliError;
use crate::output::{sha256_hex, OutputDir, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "ctdt", version, about = "Stability certificates and simulations for sampled CT/DT interconnections")]
pub struct Cli {
    /// Experiment config (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `output.dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomised runs; overrides `seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for batch runs and contour grids.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Kind,
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (cfg, raw) = match &cli.config {
        Some(path) => {
            let raw = fs::read(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            let text = String::from_utf8(raw.clone())
                .map_err(|_| CliError::Config(format!("{}: not valid UTF-8", path.display())))?;
            (ExperimentConfig::parse(&text)?, raw)
        }
        None => (ExperimentConfig::default(), Vec::new()),
    };
    if let Some(kind) = cfg.kind {
        if kind != cli.command {
            return Err(CliError::Config(format!(
                "kind: config is for \"{}\" but the command is \"{}\"",
                kind.name(),
                cli.command.name()
            )));
        }
    }
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Config("--threads: must be at least 1".into()));
        }
        // Fails only if a pool already exists, in which case that pool is used.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }

    let root = cli
        .out
        .clone()
        .or_else(|| cfg.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let seed = cli.seed.or(cfg.seed);
    let mut ctx = Context { cfg, seed, out: OutputDir::create(&root)?, summary: Vec::new() };
    commands::dispatch(cli.command, &mut ctx)?;

    let manifest = RunManifest {
        kind: cli.command.name().into(),
        version: env!("CARGO_PKG_VERSION").into(),
        schema_version: SCHEMA_VERSION,
        config_sha256: sha256_hex(&raw),
        seed,
        files: ctx.out.files().to_vec(),
        summary: ctx.summary,
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
    ctx.out.write("manifest.json", &(json + "\n"))?;
    Ok(())
}
