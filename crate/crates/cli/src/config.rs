//! JSON run configuration with explicit units. Times are in units of ω0,
//! temperatures in millikelvin unless given as `temperature_w0`.

use std::path::Path;

use qec5_core::channels::{calibrate_relaxation, temperature_from_millikelvin, temperature_to_millikelvin};
use qec5_core::{DephasingModel, ExperimentConfig, FidelityMode, NoiseConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub theta: f64,
    pub phi: f64,
    /// Defaults to 5 mK when neither temperature field is given.
    #[serde(rename = "temperature_mK", skip_serializing_if = "Option::is_none")]
    pub temperature_mk: Option<f64>,
    /// Dimensionless `k_B T ω0 / ħ`; exclusive with `temperature_mK`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature_w0: Option<f64>,
    /// Replace the temperature by the one whose relaxation matches the
    /// dephasing drop after one ω0.
    pub calibrate_relaxation: bool,
    pub dephasing_rate_per_w0: f64,
    pub dephasing_model: DephasingModel,
    pub enable_dephasing: bool,
    pub enable_relaxation: bool,
    pub dt_w0: f64,
    pub total_time_w0: f64,
    pub record_every: usize,
    pub fidelity_mode: FidelityMode,
    pub baseline: bool,
}

impl Default for FileConfig {
    fn default() -> Self {
        let mut cfg = Self::from_experiment(&ExperimentConfig::default());
        cfg.temperature_w0 = None;
        cfg
    }
}

/// Values derived while resolving a [`FileConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub temperature_w0: f64,
    #[serde(rename = "temperature_mK")]
    pub temperature_mk: f64,
    pub n_rounds: usize,
}

impl Resolved {
    pub fn of(cfg: &ExperimentConfig) -> Self {
        Self {
            temperature_w0: cfg.noise.temperature,
            temperature_mk: temperature_to_millikelvin(cfg.noise.temperature),
            n_rounds: cfg.n_rounds(),
        }
    }
}

fn field_error(field: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("field `{field}`: {reason}"))
}

/// File-level name of an internal config field.
fn file_field(field: &str) -> &str {
    match field {
        "dt_qec" => "dt_w0",
        "total_time" => "total_time_w0",
        "temperature" => "temperature_w0",
        "dephasing_rate" => "dephasing_rate_per_w0",
        other => other,
    }
}

impl FileConfig {
    /// Exact snapshot of an internal config; the temperature is stored
    /// dimensionless so that reloading reproduces it bit for bit.
    pub fn from_experiment(cfg: &ExperimentConfig) -> Self {
        Self {
            theta: cfg.theta,
            phi: cfg.phi,
            temperature_mk: None,
            temperature_w0: Some(cfg.noise.temperature),
            calibrate_relaxation: false,
            dephasing_rate_per_w0: cfg.noise.dephasing_rate,
            dephasing_model: cfg.noise.dephasing_model,
            enable_dephasing: cfg.noise.enable_dephasing,
            enable_relaxation: cfg.noise.enable_relaxation,
            dt_w0: cfg.dt_qec,
            total_time_w0: cfg.total_time,
            record_every: cfg.record_every,
            fidelity_mode: cfg.fidelity_mode,
            baseline: cfg.baseline,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    fn base_temperature(&self) -> Result<f64> {
        match (self.temperature_mk, self.temperature_w0) {
            (Some(_), Some(_)) => Err(field_error(
                "temperature_mK",
                "give either temperature_mK or temperature_w0, not both",
            )),
            (Some(mk), None) => {
                if !(mk >= 0.0 && mk.is_finite()) {
                    return Err(field_error(
                        "temperature_mK",
                        format!("must be finite and >= 0, got {mk}"),
                    ));
                }
                Ok(temperature_from_millikelvin(mk))
            }
            (None, Some(t)) => Ok(t),
            (None, None) => Ok(NoiseConfig::default().temperature),
        }
    }

    pub fn resolve(&self) -> Result<(ExperimentConfig, Resolved)> {
        let mut noise = NoiseConfig {
            temperature: self.base_temperature()?,
            dephasing_rate: self.dephasing_rate_per_w0,
            dephasing_model: self.dephasing_model,
            enable_dephasing: self.enable_dephasing,
            enable_relaxation: self.enable_relaxation,
        };
        let mut cfg = ExperimentConfig {
            theta: self.theta,
            phi: self.phi,
            noise,
            dt_qec: self.dt_w0,
            total_time: self.total_time_w0,
            record_every: self.record_every,
            fidelity_mode: self.fidelity_mode,
            baseline: self.baseline,
        };
        let rename = |e: qec5_core::Error| match e {
            qec5_core::Error::InvalidConfig { field, reason } => field_error(file_field(field), reason),
            other => CliError::from(other),
        };
        cfg.validate().map_err(rename)?;
        if self.calibrate_relaxation {
            noise.temperature =
                calibrate_relaxation(&noise, &cfg.input_state()).map_err(|e| field_error("calibrate_relaxation", e))?;
            cfg.noise = noise;
        }
        Ok((cfg, Resolved::of(&cfg)))
    }
}
