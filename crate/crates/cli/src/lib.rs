//! Command-line front end: JSON configs, figure presets, CSV and manifest
//! output.

pub mod app;
pub mod config;
pub mod error;
pub mod output;

pub use app::{execute, run_cli, Cli, Command};
pub use config::{FileConfig, Resolved};
pub use error::CliError;
pub use output::{emit_csv, write_trace, RunManifest};
