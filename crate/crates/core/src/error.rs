use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("dimension {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("state vector norm {norm} deviates from 1")]
    NotNormalized { norm: f64 },

    #[error("matrix is not Hermitian (max |rho - rho^dagger| = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("trace {trace} deviates from 1")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    InvalidQubitIndex { index: usize, n_qubits: usize },

    #[error("qubit index {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("the kept subsystem is empty")]
    EmptySubsystem,

    #[error("operator is not an isometry (max |U^dagger U - I| = {residual:e})")]
    NotIsometry { residual: f64 },

    #[error("Kraus operators violate completeness (max |sum E^dagger E - I| = {residual:e})")]
    IncompleteChannel { residual: f64 },

    #[error("{name} = {value} is outside its valid range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("{n} qubits requested, at most {max} are supported here")]
    TooManyQubits { n: usize, max: usize },

    #[error("unknown dephasing model `{0}` (expected `independent` or `collective`)")]
    UnknownDephasingModel(String),

    #[error("unknown fidelity mode `{0}` (expected `decoded` or `codespace`)")]
    UnknownFidelityMode(String),

    #[error("invalid Pauli error label `{0}`")]
    InvalidPauliLabel(String),

    #[error("relaxation calibration has no root: {0}")]
    NoCalibrationRoot(String),

    #[error("invalid configuration: {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("code table inconsistency: {0}")]
    TableInconsistent(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}
