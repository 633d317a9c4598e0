//! Periodic error correction experiments: encode, alternate noise intervals
//! with correction rounds, and record the fidelity against the input state.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{
    calibrate_relaxation, dephasing_rate_matching_relaxation, temperature_from_millikelvin, DephasingModel,
    NoiseConfig, NoiseStep,
};
use crate::code5::QecEngine;
use crate::error::{Error, Result};
use crate::linalg::{fidelity_pure, DensityMatrix, PureState};

/// Upper bound on `total_time / dt_qec`.
pub const MAX_ROUNDS: f64 = 1e7;

/// Which state the corrected fidelity is measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FidelityMode {
    /// Decoded logical qubit against the input qubit.
    #[default]
    Decoded,
    /// Physical 5-qubit state against the encoded input.
    Codespace,
}

impl fmt::Display for FidelityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FidelityMode::Decoded => "decoded",
            FidelityMode::Codespace => "codespace",
        })
    }
}

impl FromStr for FidelityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "decoded" => Ok(FidelityMode::Decoded),
            "codespace" => Ok(FidelityMode::Codespace),
            _ => Err(Error::UnknownFidelityMode(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub theta: f64,
    pub phi: f64,
    pub noise: NoiseConfig,
    /// Time between corrections, in units of ω0.
    pub dt_qec: f64,
    pub total_time: f64,
    /// Rounds per recorded sample.
    pub record_every: usize,
    pub fidelity_mode: FidelityMode,
    /// Also evolve the unencoded qubit under the same noise.
    pub baseline: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            theta: 1.0,
            phi: 1.0,
            noise: NoiseConfig::default(),
            dt_qec: 1.0,
            total_time: 1000.0,
            record_every: 1,
            fidelity_mode: FidelityMode::Decoded,
            baseline: true,
        }
    }
}

fn invalid(field: &'static str, reason: String) -> Error {
    Error::InvalidConfig { field, reason }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=PI).contains(&self.theta) {
            return Err(invalid("theta", format!("must lie in [0, pi], got {}", self.theta)));
        }
        if !(0.0..2.0 * PI).contains(&self.phi) {
            return Err(invalid("phi", format!("must lie in [0, 2pi), got {}", self.phi)));
        }
        for (field, value) in [("dt_qec", self.dt_qec), ("total_time", self.total_time)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(invalid(field, format!("must be finite and > 0, got {value}")));
            }
        }
        if self.dt_qec > self.total_time {
            return Err(invalid(
                "dt_qec",
                format!("{} exceeds total_time {}", self.dt_qec, self.total_time),
            ));
        }
        if self.total_time / self.dt_qec > MAX_ROUNDS {
            return Err(invalid(
                "total_time",
                format!(
                    "{} rounds exceeds the limit of {MAX_ROUNDS:e}",
                    self.total_time / self.dt_qec
                ),
            ));
        }
        if self.record_every == 0 {
            return Err(invalid("record_every", "must be >= 1".into()));
        }
        self.noise.validate()
    }

    pub fn input_state(&self) -> PureState {
        PureState::from_bloch(self.theta, self.phi)
    }

    /// Number of correction rounds; a trailing partial interval counts as a
    /// full one.
    pub fn n_rounds(&self) -> usize {
        (self.total_time / self.dt_qec - 1e-9).ceil().max(1.0) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub time: f64,
    pub corrected: f64,
    pub uncorrected: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FidelityTrace {
    pub samples: Vec<Sample>,
}

impl FidelityTrace {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn final_corrected(&self) -> f64 {
        self.last().map_or(f64::NAN, |s| s.corrected)
    }

    /// Times strictly increasing, first sample at 0 with fidelity 1 and
    /// every fidelity in `[0, 1 + 1e-12]`.
    pub fn check_invariants(&self) -> Result<()> {
        let first = self
            .samples
            .first()
            .ok_or_else(|| Error::InvariantViolation("empty trace".into()))?;
        if first.time != 0.0 || (first.corrected - 1.0).abs() > 1e-12 {
            return Err(Error::InvariantViolation(format!(
                "first sample is ({}, {}), expected (0, 1)",
                first.time, first.corrected
            )));
        }
        for pair in self.samples.windows(2) {
            if pair[1].time <= pair[0].time {
                return Err(Error::InvariantViolation(format!(
                    "sample times not increasing at t = {}",
                    pair[1].time
                )));
            }
        }
        for s in &self.samples {
            for f in std::iter::once(s.corrected).chain(s.uncorrected) {
                if !(0.0..=1.0 + 1e-12).contains(&f) {
                    return Err(Error::InvariantViolation(format!(
                        "fidelity {f} at t = {} out of range",
                        s.time
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Extra checking performed while running.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Validate the physical state after every round.
    pub validate: bool,
}

fn check_state(rho: &DensityMatrix, round: usize) -> Result<()> {
    rho.validate(true)
        .map_err(|e| Error::InvariantViolation(format!("round {round}: {e}")))
}

pub fn run(cfg: &ExperimentConfig) -> Result<FidelityTrace> {
    run_with(cfg, RunOptions::default())
}

pub fn run_with(cfg: &ExperimentConfig, options: RunOptions) -> Result<FidelityTrace> {
    cfg.validate()?;
    let engine = QecEngine::standard();
    let psi = cfg.input_state();
    let psi_l = engine.encode(&psi)?;
    let step = NoiseStep::new(&cfg.noise, 5, cfg.dt_qec)?;
    let baseline_step = cfg
        .baseline
        .then(|| NoiseStep::new(&cfg.noise, 1, cfg.dt_qec))
        .transpose()?;

    let corrected_fidelity = |rho: &DensityMatrix| match cfg.fidelity_mode {
        FidelityMode::Decoded => fidelity_pure(&psi, &engine.decode(rho)?),
        FidelityMode::Codespace => fidelity_pure(&psi_l, rho),
    };

    let mut rho = psi_l.to_density();
    let mut rho1 = psi.to_density();
    let rounds = cfg.n_rounds();
    let mut samples = Vec::with_capacity(rounds / cfg.record_every + 2);
    samples.push(Sample {
        time: 0.0,
        corrected: corrected_fidelity(&rho)?,
        uncorrected: baseline_step.as_ref().map(|_| fidelity_pure(&psi, &rho1)).transpose()?,
    });

    for k in 1..=rounds {
        rho = engine.round_ancilla(&step.apply(&rho)?)?;
        if let Some(b) = &baseline_step {
            rho1 = b.apply(&rho1)?;
        }
        if options.validate {
            check_state(&rho, k)?;
            if baseline_step.is_some() {
                check_state(&rho1, k)?;
            }
        }
        if k % cfg.record_every == 0 || k == rounds {
            samples.push(Sample {
                time: k as f64 * cfg.dt_qec,
                corrected: corrected_fidelity(&rho)?,
                uncorrected: baseline_step.as_ref().map(|_| fidelity_pure(&psi, &rho1)).transpose()?,
            });
        }
    }

    let trace = FidelityTrace { samples };
    if options.validate {
        trace.check_invariants()?;
    }
    Ok(trace)
}

/// Unencoded 1-qubit evolution sampled after every interval, as
/// `(time, fidelity)` pairs starting at `t = 0`.
pub fn run_unencoded(psi: &PureState, noise: &NoiseConfig, dt: f64, total_time: f64) -> Result<Vec<(f64, f64)>> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            context: "run_unencoded",
            expected: 2,
            found: psi.dim(),
        });
    }
    let cfg = ExperimentConfig {
        noise: *noise,
        dt_qec: dt,
        total_time,
        ..ExperimentConfig::default()
    };
    cfg.validate()?;
    let step = NoiseStep::new(noise, 1, dt)?;
    let mut rho = psi.to_density();
    let mut out = vec![(0.0, fidelity_pure(psi, &rho)?)];
    for k in 1..=cfg.n_rounds() {
        rho = step.apply(&rho)?;
        out.push((k as f64 * dt, fidelity_pure(psi, &rho)?));
    }
    Ok(out)
}

/// Final corrected fidelity for each `dt`, in the order given. Runs execute
/// in parallel; each is deterministic.
pub fn sweep_dt(cfg: &ExperimentConfig, dt_values: &[f64]) -> Result<Vec<(f64, f64)>> {
    dt_values
        .par_iter()
        .map(|&dt| {
            let run_cfg = ExperimentConfig {
                dt_qec: dt,
                baseline: false,
                ..*cfg
            };
            Ok((dt, run(&run_cfg)?.final_corrected()))
        })
        .collect()
}

/// Single-interval infidelities and their log-log slopes against `dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub dts: Vec<f64>,
    pub corrected: Vec<f64>,
    pub uncorrected: Vec<f64>,
    pub corrected_slope: f64,
    pub uncorrected_slope: f64,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Infidelity `1 - F` after one noise interval plus one correction round,
/// and for the unencoded qubit after the same interval, for each `dt`.
pub fn infidelity_scaling(cfg: &ExperimentConfig, dts: &[f64]) -> Result<ScalingFit> {
    let mut corrected = Vec::with_capacity(dts.len());
    let mut uncorrected = Vec::with_capacity(dts.len());
    for &dt in dts {
        let one_round = ExperimentConfig {
            dt_qec: dt,
            total_time: dt,
            record_every: 1,
            baseline: true,
            ..*cfg
        };
        let trace = run(&one_round)?;
        let last = trace.last().expect("one-round trace has two samples");
        corrected.push(1.0 - last.corrected);
        uncorrected.push(1.0 - last.uncorrected.expect("baseline requested"));
    }
    Ok(ScalingFit {
        corrected_slope: loglog_slope(dts, &corrected),
        uncorrected_slope: loglog_slope(dts, &uncorrected),
        dts: dts.to_vec(),
        corrected,
        uncorrected,
    })
}

/// Scenarios of the three published fidelity plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Dephasing only, Δt = ω0, 1000 ω0.
    Fig4,
    /// Relaxation only, calibrated against dephasing, Δt ∈ {1, 0.1, 0.01} ω0.
    Fig5,
    /// Both noise sources, Δt = 0.001 ω0.
    Fig6,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Fig4, Preset::Fig5, Preset::Fig6];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
        }
    }

    /// One config per trace in the scenario.
    pub fn configs(self) -> Result<Vec<ExperimentConfig>> {
        let op = OperatingPoint::preset()?;
        let base = ExperimentConfig::default();
        Ok(match self {
            Preset::Fig4 => vec![ExperimentConfig {
                noise: NoiseConfig::dephasing_only(op.dephasing_rate, DephasingModel::Independent),
                ..base
            }],
            Preset::Fig5 => {
                let reference = NoiseConfig::dephasing_only(op.dephasing_rate, DephasingModel::Independent);
                let temperature = calibrate_relaxation(&reference, &base.input_state())?;
                let noise = NoiseConfig {
                    dephasing_rate: op.dephasing_rate,
                    ..NoiseConfig::relaxation_only(temperature)
                };
                FIG5_DTS
                    .iter()
                    .map(|&dt_qec| ExperimentConfig {
                        noise,
                        dt_qec,
                        total_time: 10.0,
                        ..base
                    })
                    .collect()
            }
            Preset::Fig6 => vec![ExperimentConfig {
                noise: op.combined(),
                dt_qec: 0.001,
                total_time: 1.0,
                record_every: 100,
                ..base
            }],
        })
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid("preset", format!("unknown preset {s:?}, expected fig4, fig5 or fig6")))
    }
}

pub const FIG5_DTS: [f64; 3] = [1.0, 0.1, 0.01];

/// Noise parameters at which relaxation (5 mK) and dephasing lower the
/// fidelity of the `θ = φ = 1` qubit equally after one ω0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub temperature: f64,
    pub dephasing_rate: f64,
}

impl OperatingPoint {
    pub fn preset() -> Result<Self> {
        let temperature = temperature_from_millikelvin(5.0);
        let psi = ExperimentConfig::default().input_state();
        Ok(Self {
            temperature,
            dephasing_rate: dephasing_rate_matching_relaxation(&psi, temperature)?,
        })
    }

    pub fn combined(&self) -> NoiseConfig {
        NoiseConfig {
            temperature: self.temperature,
            dephasing_rate: self.dephasing_rate,
            ..NoiseConfig::default()
        }
    }
}
