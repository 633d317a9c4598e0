//! Density-matrix simulation of the five-qubit perfect code under dephasing
//! and amplitude damping.

pub mod channels;
pub mod code5;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod pauli;
pub mod structured;

#[cfg(test)]
mod testutil;

pub use channels::{
    amplitude_damping_qubit, apply_kraus, build_dephasing_matrix, calibrate_relaxation, dephase,
    dephasing_rate_matching_relaxation, gamma_of, lift_channel, noise_step, DephasingMatrix, DephasingModel,
    KrausChannel, NoiseConfig, NoiseOrder, NoiseStep,
};
pub use code5::{
    decode, encode, qec_round_ancilla, qec_round_projective, syndrome_of, CodeTables, DecoderFrame, EncoderUnitary,
    QecEngine,
};
pub use error::{Error, Result};
pub use experiment::{
    run, run_unencoded, run_with, sweep_dt, ExperimentConfig, FidelityMode, FidelityTrace, OperatingPoint, Preset,
    RunOptions, Sample,
};
pub use linalg::{
    conjugate, fidelity_pure, hadamard_product, kron, partial_trace, CMatrix, CVector, DensityMatrix, Operator,
    PureState, C64,
};
pub use pauli::{Pauli, PauliError, PauliString};
