//! The DiVincenzo-Shor five-qubit perfect code.

mod decoder;
mod round;
mod tables;

pub use decoder::{build_encoder_unitary, encode, DecoderFrame, EncoderUnitary};
pub use round::{
    ancilla_qubit, qec_round_ancilla, qec_round_projective, CorrectionOperator, QecEngine, SyndromeExtraction,
    N_ANCILLA, N_TOTAL,
};
pub use tables::{CodeTables, N_DATA, N_SYNDROMES};

use crate::error::Result;
use crate::linalg::DensityMatrix;
use crate::pauli::PauliError;

/// Syndrome `M3 M2 M1 M0` of a single-qubit error.
pub fn syndrome_of(error: PauliError) -> Result<usize> {
    QecEngine::standard().tables().syndrome_of(error)
}

/// Canonical decode of a 5-qubit state to the logical qubit.
pub fn decode(rho5: &DensityMatrix) -> Result<DensityMatrix> {
    QecEngine::standard().decode(rho5)
}
