//! Command-line surface for `divcorr-core`: configuration, subcommands and
//! report files.

pub mod commands;
pub mod config;
pub mod error;
pub mod expr;
pub mod output;

use std::time::{Instant, SystemTime};

pub use commands::{run, RunOutput};
pub use config::{Command, Flags, RunConfig};
pub use error::CliError;

/// Runs `command`, writes its CSV and manifest, and returns the CSV path.
pub fn run_and_write(command: Command, cfg: &RunConfig) -> Result<std::path::PathBuf, CliError> {
    let cfg = &cfg.with_defaults();
    let started = SystemTime::now();
    let clock = Instant::now();
    let out = run(command, cfg)?;
    let dir = cfg.out.clone().unwrap_or_else(|| output::default_dir(command));
    let (csv, _) = output::write(&dir, command, cfg, &out, started, clock.elapsed().as_secs_f64())?;
    Ok(csv)
}
