//! Report files: `<command>.csv` and `manifest.json` in the output directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::commands::RunOutput;
use crate::config::{Command, RunConfig};
use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub command: &'static str,
    pub version: &'static str,
    pub config: &'a RunConfig,
    pub report: String,
    pub flags: &'a BTreeMap<String, Value>,
    pub checksums: &'a BTreeMap<String, String>,
    pub summary: &'a Value,
    pub started_unix_secs: u64,
    pub wall_clock_secs: f64,
}

pub fn default_dir(command: Command) -> PathBuf {
    PathBuf::from("out").join(command.name())
}

pub fn write(
    dir: &Path,
    command: Command,
    cfg: &RunConfig,
    out: &RunOutput,
    started: SystemTime,
    wall_clock_secs: f64,
) -> Result<(PathBuf, PathBuf), CliError> {
    std::fs::create_dir_all(dir)?;
    let csv_name = format!("{}.csv", command.name());
    let csv_path = dir.join(&csv_name);
    std::fs::write(&csv_path, &out.csv)?;
    let manifest = Manifest {
        command: command.name(),
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        report: csv_name,
        flags: &out.flags,
        checksums: &out.checksums,
        summary: &out.summary,
        started_unix_secs: started
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        wall_clock_secs,
    };
    let man_path = dir.join("manifest.json");
    std::fs::write(&man_path, serde_json::to_string_pretty(&manifest)?)?;
    Ok((csv_path, man_path))
}
