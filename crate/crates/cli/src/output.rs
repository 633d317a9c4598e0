//! CSV traces and the JSON manifest written next to them.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use qec5_core::{ExperimentConfig, FidelityTrace};
use serde::{Deserialize, Serialize};

use crate::config::{FileConfig, Resolved};
use crate::error::{CliError, Result};

pub const TRACE_HEADER: &str = "time_w0,fidelity_corrected,fidelity_uncorrected";
pub const SWEEP_HEADER: &str = "dt_w0,fidelity_final_corrected";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    /// Reloadable as a config file; reproduces the run exactly.
    pub config: FileConfig,
    pub resolved: Resolved,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_values: Option<Vec<f64>>,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, cfg: &ExperimentConfig, elapsed: Duration) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            config: FileConfig::from_experiment(cfg),
            resolved: Resolved::of(cfg),
            dt_values: None,
            wall_clock_seconds: elapsed.as_secs_f64(),
        }
    }

    pub fn with_dt_values(mut self, dts: &[f64]) -> Self {
        self.dt_values = Some(dts.to_vec());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_trace<W: Write>(trace: &FidelityTrace, mut w: W) -> io::Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    for s in &trace.samples {
        let uncorrected = s.uncorrected.map(format_value).unwrap_or_default();
        writeln!(
            w,
            "{},{},{}",
            format_value(s.time),
            format_value(s.corrected),
            uncorrected
        )?;
    }
    Ok(())
}

pub fn write_sweep<W: Write>(rows: &[(f64, f64)], mut w: W) -> io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for (dt, f) in rows {
        writeln!(w, "{},{}", format_value(*dt), format_value(*f))?;
    }
    Ok(())
}

pub fn manifest_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Writes the trace to `path` and the manifest to the same stem with a
/// `.json` extension.
pub fn emit_csv(trace: &FidelityTrace, manifest: &RunManifest, path: &Path) -> Result<()> {
    let mut body = Vec::new();
    write_trace(trace, &mut body).map_err(|e| CliError::io(path, e))?;
    write_file(path, &body)?;
    write_file(&manifest_path(path), manifest.to_json().as_bytes())
}

pub fn emit_sweep(rows: &[(f64, f64)], manifest: &RunManifest, path: &Path) -> Result<()> {
    let mut body = Vec::new();
    write_sweep(rows, &mut body).map_err(|e| CliError::io(path, e))?;
    write_file(path, &body)?;
    write_file(&manifest_path(path), manifest.to_json().as_bytes())
}
