//! `bowsim`: figure and table data for the bow-state model.

// `!(x > y)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::Format;
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "bowsim",
    version,
    about = "Bow-state trajectories, energies and atom-dielectric estimates"
)]
pub struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Override one configuration value by dotted path, e.g. `grid.intervals=800`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub sets: Vec<String>,
    /// Data format of the main output file.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output directory.
    #[arg(long, short = 'o', global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// String profiles u/ξ against yγ/s at fixed γτ.
    StringProfile {
        /// Reconstruct from the numerical trajectory instead of the closed form.
        #[arg(long)]
        via_solver: bool,
    },
    /// Particle and string energies along the trajectory.
    Energies {
        #[arg(long)]
        via_solver: bool,
    },
    /// Underbarrier action against the WKB action.
    Action {
        #[arg(long)]
        via_solver: bool,
    },
    /// Bow energy against a tilting field.
    FieldSweep,
    /// Coherence length against atom-surface distance.
    Regimes,
    /// Van der Waals energy of hydrogen above the dielectric.
    Vdw,
    /// Vacuum and dielectric Lamb shifts.
    Lamb,
    /// Print the resolved configuration and its hash.
    ShowConfig,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::StringProfile { .. } => "string-profile",
            Command::Energies { .. } => "energies",
            Command::Action { .. } => "action",
            Command::FieldSweep => "field-sweep",
            Command::Regimes => "regimes",
            Command::Vdw => "vdw",
            Command::Lamb => "lamb",
            Command::ShowConfig => "show-config",
        }
    }
}

pub fn resolve(cli: &Cli) -> Result<config::RunConfig, CliError> {
    let mut cfg = config::load(cli.config.as_deref(), &cli.sets)?;
    if let Some(f) = cli.format {
        cfg.output.format = f;
    }
    if let Some(dir) = &cli.out {
        cfg.output.dir = dir.to_string_lossy().into_owned();
    }
    Ok(cfg)
}

pub fn execute(cli: &Cli) -> Result<Option<PathBuf>, CliError> {
    let cfg = resolve(cli)?;
    let out = match &cli.command {
        Command::ShowConfig => {
            let doc =
                serde_json::json!({ "config_hash": output::config_hash(&cfg), "config": cfg });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("config serializes")
            );
            return Ok(None);
        }
        Command::StringProfile { via_solver } => commands::string_profile(&cfg, *via_solver)?,
        Command::Energies { via_solver } => commands::energies(&cfg, *via_solver)?,
        Command::Action { via_solver } => commands::action(&cfg, *via_solver)?,
        Command::FieldSweep => commands::field_sweep(&cfg)?,
        Command::Regimes => commands::regimes(&cfg)?,
        Command::Vdw => commands::vdw(&cfg)?,
        Command::Lamb => commands::lamb(&cfg)?,
    };
    let emitter = output::Emitter::new(&cfg)?;
    commands::emit(&emitter, cli.command.name(), out).map(Some)
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(Some(path)) => {
            println!("{}", path.display());
            0
        }
        Ok(None) => 0,
        Err(e) => {
            eprintln!("bowsim: {e}");
            e.exit_code()
        }
    }
}
