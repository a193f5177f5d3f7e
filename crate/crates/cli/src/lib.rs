//! Library side of the `sqed` command: configuration, scenario runners and
//! table output.

pub mod config;
pub mod scenarios;
pub mod table;

use std::fmt;
use std::path::PathBuf;

pub use config::{RunConfig, Scenario, OUTPUT_DIR_ENV};
pub use scenarios::{compute, unit_report, Outcome};
pub use table::{write_table, Cell, Format, Table};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, config keys or values.
    Usage(String),
    Model(sqed_core::Error),
    Io(String),
}

impl CliError {
    /// 2 for invalid input, 3 for numerical failure, 4 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(e) if e.is_numerical() => 3,
            CliError::Model(_) => 2,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "InvalidConfig: {m}"),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "IoError: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<sqed_core::Error> for CliError {
    fn from(e: sqed_core::Error) -> Self {
        CliError::Model(e)
    }
}

/// Computes the scenario, writes its table and returns the summary line.
pub fn run_scenario(cfg: &RunConfig) -> Result<String, CliError> {
    let out = compute(cfg)?;
    write_table(&out.table, cfg.format, &cfg.output_path)?;
    let mut line = String::from(cfg.scenario.name());
    for (k, v) in &out.summary {
        line.push_str(&format!(" {k}={v}"));
    }
    line.push_str(&format!(" rows={} output={}", out.table.rows.len(), cfg.output_path.display()));
    Ok(line)
}

/// Default output directory from [`OUTPUT_DIR_ENV`], if set and non-empty.
pub fn output_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(OUTPUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}
