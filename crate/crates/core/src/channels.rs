//! Noise channels of the charge-qubit register.
//!
//! Decoherence is a generalized dephasing channel in the computational
//! (charge position) basis: a Hadamard product with a decoherence matrix.
//! Relaxation is amplitude damping from `|->` (excited) to `|+>` (ground),
//! applied independently to every qubit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    fidelity_pure, hadamard_product, hermitian_eigenvalues, hermiticity_residual, kron_all, max_abs_diff, CMatrix,
    DensityMatrix, Operator, PureState, ALGEBRA_TOL, C64, ONE, PSD_FLOOR, ZERO,
};

/// Boltzmann constant in J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380649e-23;
/// Reduced Planck constant in J s.
pub const HBAR: f64 = 1.054571817e-34;
/// The simulation time unit (bath cut-off timescale of a GaAs charge qubit), in seconds.
pub const OMEGA0_SECONDS: f64 = 0.2e-10;

/// Largest register `lift_channel` will expand (4^n Kraus entries of size 4^n).
pub const MAX_LIFT_QUBITS: usize = 10;

/// Converts a temperature in millikelvin to the dimensionless rate per
/// unit of ω0 used by [`gamma_of`]: `k_B T ω0 / ħ`.
pub fn temperature_from_millikelvin(millikelvin: f64) -> f64 {
    BOLTZMANN * millikelvin * 1e-3 * OMEGA0_SECONDS / HBAR
}

pub fn temperature_to_millikelvin(temperature: f64) -> f64 {
    temperature * HBAR / (BOLTZMANN * 1e-3 * OMEGA0_SECONDS)
}

/// Relaxation probability after time `t` (ω0 units): `1 - exp(-t T)`.
pub fn gamma_of(t: f64, temperature: f64) -> f64 {
    -(-t * temperature).exp_m1()
}

/// A completely positive trace-preserving map given by Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    operators: Vec<Operator>,
}

impl KrausChannel {
    /// Validates shapes and the completeness relation `sum E^dagger E = I`.
    pub fn new(operators: Vec<Operator>) -> Result<Self> {
        let dim = operators
            .first()
            .map(Operator::cols)
            .ok_or(Error::IncompleteChannel { residual: 1.0 })?;
        for op in &operators {
            if op.rows() != dim || op.cols() != dim {
                return Err(Error::DimensionMismatch {
                    context: "KrausChannel::new",
                    expected: dim,
                    found: op.rows().max(op.cols()),
                });
            }
        }
        let ch = Self { dim, operators };
        let residual = ch.completeness_residual();
        if residual > ALGEBRA_TOL {
            return Err(Error::IncompleteChannel { residual });
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            operators: vec![Operator::identity(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[Operator] {
        &self.operators
    }

    pub fn completeness_residual(&self) -> f64 {
        let sum = self
            .operators
            .iter()
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, e| {
                acc + e.matrix().adjoint() * e.matrix()
            });
        max_abs_diff(&sum, &CMatrix::identity(self.dim, self.dim))
    }
}

/// Amplitude damping with decay probability `gamma`, written in the
/// `{|+>, |->}` energy basis and returned in the computational basis.
pub fn amplitude_damping_qubit(gamma: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::OutOfRange {
            name: "gamma",
            value: gamma,
            range: "[0, 1]",
        });
    }
    let c = |v: f64| C64::new(v, 0.0);
    // Energy basis: index 0 = |+> (ground), 1 = |-> (excited).
    let e0 = Operator::from_row_slice(2, 2, &[ONE, ZERO, ZERO, c((1.0 - gamma).sqrt())]);
    let e1 = Operator::from_row_slice(2, 2, &[ZERO, c(gamma.sqrt()), ZERO, ZERO]);
    let h = Operator::hadamard();
    let to_computational = |e: &Operator| &(&h * e) * &h;
    KrausChannel::new(vec![to_computational(&e0), to_computational(&e1)])
}

/// `ch^{⊗n}` as the full set of n-fold Kronecker products of its operators.
pub fn lift_channel(ch: &KrausChannel, n: usize) -> Result<KrausChannel> {
    if ch.dim() != 2 {
        return Err(Error::DimensionMismatch {
            context: "lift_channel",
            expected: 2,
            found: ch.dim(),
        });
    }
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "n",
            value: 0.0,
            range: ">= 1",
        });
    }
    if n > MAX_LIFT_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            max: MAX_LIFT_QUBITS,
        });
    }
    let k = ch.operators().len();
    let operators = (0..k.pow(n as u32))
        .map(|mut code| {
            let mut factors = vec![Operator::identity(2); n];
            for slot in factors.iter_mut().rev() {
                *slot = ch.operators()[code % k].clone();
                code /= k;
            }
            kron_all(&factors)
        })
        .collect();
    KrausChannel::new(operators)
}

/// `sum_i E_i rho E_i^dagger`.
pub fn apply_kraus(rho: &DensityMatrix, ch: &KrausChannel) -> Result<DensityMatrix> {
    if rho.dim() != ch.dim() {
        return Err(Error::DimensionMismatch {
            context: "apply_kraus",
            expected: ch.dim(),
            found: rho.dim(),
        });
    }
    let out = ch.operators().iter().fold(CMatrix::zeros(ch.dim, ch.dim), |acc, e| {
        let m = e.matrix();
        acc + m * rho.matrix() * m.adjoint()
    });
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// Shape of the multi-qubit decoherence matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DephasingModel {
    /// Each qubit dephases on its own: `D_ij = exp(-λt · hamming(i, j))`.
    #[default]
    Independent,
    /// Common bath coupling to the total charge:
    /// `D_ij = exp(-λt · (w(i) - w(j))^2)`, `w` the Hamming weight.
    Collective,
}

impl fmt::Display for DephasingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DephasingModel::Independent => "independent",
            DephasingModel::Collective => "collective",
        })
    }
}

impl FromStr for DephasingModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "independent" => Ok(Self::Independent),
            "collective" => Ok(Self::Collective),
            other => Err(Error::UnknownDephasingModel(other.to_string())),
        }
    }
}

/// Unit-diagonal Hermitian matrix of environment overlaps.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasingMatrix {
    entries: CMatrix,
}

impl DephasingMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        if let Some(i) = (0..entries.nrows()).find(|&i| entries[(i, i)] != ONE) {
            return Err(Error::InvariantViolation(format!(
                "decoherence matrix diagonal entry {i} is {}, expected exactly 1",
                entries[(i, i)]
            )));
        }
        let residual = hermiticity_residual(&entries);
        if residual > 1e-13 {
            return Err(Error::NotHermitian { residual });
        }
        if let Some(v) = entries.iter().find(|v| v.norm() > 1.0 + 1e-13) {
            return Err(Error::InvariantViolation(format!(
                "decoherence matrix entry of modulus {} exceeds 1",
                v.norm()
            )));
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.entries)[0]
    }

    /// Positivity is what makes the induced map completely positive.
    pub fn validate_psd(&self) -> Result<()> {
        let min_eigenvalue = self.min_eigenvalue();
        if min_eigenvalue < PSD_FLOOR {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(())
    }
}

pub fn build_dephasing_matrix(model: DephasingModel, n: usize, lambda: f64, t: f64) -> Result<DephasingMatrix> {
    if n == 0 || n > 16 {
        return Err(Error::TooManyQubits { n, max: 16 });
    }
    for (name, value) in [("lambda", lambda), ("t", t)] {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::OutOfRange {
                name,
                value,
                range: "[0, inf)",
            });
        }
    }
    let dim = 1usize << n;
    let rate = lambda * t;
    let entries = CMatrix::from_fn(dim, dim, |i, j| {
        let distance = match model {
            DephasingModel::Independent => (i ^ j).count_ones() as f64,
            DephasingModel::Collective => {
                let dw = i.count_ones() as f64 - j.count_ones() as f64;
                dw * dw
            }
        };
        C64::new((-rate * distance).exp(), 0.0)
    });
    DephasingMatrix::new(entries)
}

/// Hadamard product of `rho` with the decoherence matrix.
pub fn dephase(rho: &DensityMatrix, d: &DephasingMatrix) -> Result<DensityMatrix> {
    if rho.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            context: "dephase",
            expected: d.dim(),
            found: rho.dim(),
        });
    }
    Ok(DensityMatrix::from_matrix_unchecked(hadamard_product(
        rho.matrix(),
        d.entries(),
    )?))
}

/// Physical noise parameters. `temperature` is the dimensionless rate
/// `k_B T ω0 / ħ`; `dephasing_rate` is λ per unit ω0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub temperature: f64,
    pub dephasing_rate: f64,
    pub dephasing_model: DephasingModel,
    pub enable_dephasing: bool,
    pub enable_relaxation: bool,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            temperature: temperature_from_millikelvin(5.0),
            dephasing_rate: 1.0,
            dephasing_model: DephasingModel::Independent,
            enable_dephasing: true,
            enable_relaxation: true,
        }
    }
}

impl NoiseConfig {
    pub fn noiseless() -> Self {
        Self {
            enable_dephasing: false,
            enable_relaxation: false,
            ..Self::default()
        }
    }

    pub fn dephasing_only(dephasing_rate: f64, dephasing_model: DephasingModel) -> Self {
        Self {
            dephasing_rate,
            dephasing_model,
            enable_relaxation: false,
            ..Self::default()
        }
    }

    pub fn relaxation_only(temperature: f64) -> Self {
        Self {
            temperature,
            enable_dephasing: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (field, value) in [
            ("temperature", self.temperature),
            ("dephasing_rate", self.dephasing_rate),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidConfig {
                    field,
                    reason: format!("must be finite and >= 0, got {value}"),
                });
            }
        }
        Ok(())
    }
}

/// Order in which the two noise processes act within one interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseOrder {
    #[default]
    DephasingFirst,
    RelaxationFirst,
}

/// Noise for one interval of length `dt` on an `n`-qubit register, built
/// once and reused across rounds.
#[derive(Debug, Clone)]
pub struct NoiseStep {
    dephasing: Option<DephasingMatrix>,
    relaxation: Option<KrausChannel>,
    order: NoiseOrder,
}

impl NoiseStep {
    pub fn new(cfg: &NoiseConfig, n_qubits: usize, dt: f64) -> Result<Self> {
        cfg.validate()?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::OutOfRange {
                name: "dt",
                value: dt,
                range: "(0, inf)",
            });
        }
        let dephasing = cfg
            .enable_dephasing
            .then(|| build_dephasing_matrix(cfg.dephasing_model, n_qubits, cfg.dephasing_rate, dt))
            .transpose()?;
        let relaxation = cfg
            .enable_relaxation
            .then(|| {
                let single = amplitude_damping_qubit(gamma_of(dt, cfg.temperature))?;
                lift_channel(&single, n_qubits)
            })
            .transpose()?;
        Ok(Self {
            dephasing,
            relaxation,
            order: NoiseOrder::default(),
        })
    }

    pub fn with_order(mut self, order: NoiseOrder) -> Self {
        self.order = order;
        self
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let deph = |r: DensityMatrix| match &self.dephasing {
            Some(d) => dephase(&r, d),
            None => Ok(r),
        };
        let relax = |r: DensityMatrix| match &self.relaxation {
            Some(ch) => apply_kraus(&r, ch),
            None => Ok(r),
        };
        match self.order {
            NoiseOrder::DephasingFirst => relax(deph(rho.clone())?),
            NoiseOrder::RelaxationFirst => deph(relax(rho.clone())?),
        }
    }
}

/// Dephasing then relaxation over an interval `dt`.
pub fn noise_step(rho: &DensityMatrix, cfg: &NoiseConfig, dt: f64) -> Result<DensityMatrix> {
    NoiseStep::new(cfg, rho.n_qubits(), dt)?.apply(rho)
}

fn dephased_fidelity(psi: &PureState, model: DephasingModel, lambda: f64, t: f64) -> Result<f64> {
    let d = build_dephasing_matrix(model, 1, lambda, t)?;
    fidelity_pure(psi, &dephase(&psi.to_density(), &d)?)
}

fn relaxed_fidelity(psi: &PureState, gamma: f64) -> Result<f64> {
    fidelity_pure(psi, &apply_kraus(&psi.to_density(), &amplitude_damping_qubit(gamma)?)?)
}

fn require_single_qubit(psi: &PureState) -> Result<()> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            context: "calibration",
            expected: 2,
            found: psi.dim(),
        });
    }
    Ok(())
}

/// Temperature (dimensionless rate) at which relaxation alone lowers the
/// fidelity of the unencoded `psi` after one ω0 by as much as dephasing
/// alone does with `cfg`'s rate and model.
///
/// The fidelity under damping decreases monotonically in `gamma`, so the
/// root is bracketed on `gamma ∈ [0, 1]` and found by bisection.
pub fn calibrate_relaxation(cfg: &NoiseConfig, psi: &PureState) -> Result<f64> {
    require_single_qubit(psi)?;
    cfg.validate()?;
    let target = dephased_fidelity(psi, cfg.dephasing_model, cfg.dephasing_rate, 1.0)?;
    if 1.0 - target <= f64::EPSILON {
        return Ok(0.0);
    }
    let floor = relaxed_fidelity(psi, 1.0)?;
    if floor > target {
        return Err(Error::NoCalibrationRoot(format!(
            "relaxation can lower the fidelity only to {floor:.12}, dephasing reaches {target:.12}"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if relaxed_fidelity(psi, mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let gamma = 0.5 * (lo + hi);
    let miss = (relaxed_fidelity(psi, gamma)? - target).abs();
    if miss > 1e-9 {
        return Err(Error::NoCalibrationRoot(format!(
            "bisection stalled with |dF| = {miss:e}"
        )));
    }
    Ok(-(-gamma).ln_1p())
}

/// Dephasing rate λ at which dephasing alone lowers the fidelity of the
/// unencoded `psi` after one ω0 by as much as relaxation does at
/// `temperature`. Inverse of [`calibrate_relaxation`].
///
/// For `psi = a|0> + b|1>`, `F^2 = |a|^4 + |b|^4 + 2|a|^2|b|^2 e^{-λ}`.
pub fn dephasing_rate_matching_relaxation(psi: &PureState, temperature: f64) -> Result<f64> {
    require_single_qubit(psi)?;
    let target = relaxed_fidelity(psi, gamma_of(1.0, temperature))?;
    if 1.0 - target <= f64::EPSILON {
        return Ok(0.0);
    }
    let p0 = psi.amplitudes()[0].norm_sqr();
    let p1 = psi.amplitudes()[1].norm_sqr();
    let populations = p0 * p0 + p1 * p1;
    let coherence = 2.0 * p0 * p1;
    let factor = (target * target - populations) / coherence;
    if !(factor > 0.0 && factor <= 1.0) {
        return Err(Error::NoCalibrationRoot(format!(
            "dephasing cannot bring the fidelity down to {target:.12}"
        )));
    }
    Ok(-factor.ln())
}
