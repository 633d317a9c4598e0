//! One round of quantum error correction.
//!
//! The ancilla route follows the circuit: adjoin four `|+>` ancillas, apply
//! each stabilizer controlled on its ancilla, rotate the ancillas to the
//! computational basis, apply the conditional correction
//! `prod_M (E_M^dagger ⊗ |M><M| + I ⊗ (I - |M><M|))`, and trace the ancillas
//! out. The projector route `sum_M E_M^dagger P_M rho P_M E_M` is its
//! independent oracle.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{kron_all, max_abs_diff, partial_trace, CMatrix, DensityMatrix, Operator, PureState, C64};
use crate::pauli::PauliString;
use crate::structured::{conjugate_single_qubit, gate_entries, Monomial};

use super::decoder::{encode, DecoderFrame, EncoderUnitary};
use super::tables::{CodeTables, N_DATA, N_SYNDROMES};

pub const N_ANCILLA: usize = 4;
pub const N_TOTAL: usize = N_DATA + N_ANCILLA;
const DIM_DATA: usize = 1 << N_DATA;
const DIM_TOTAL: usize = 1 << N_TOTAL;

/// Register qubit holding the ancilla that records stabilizer `k`: ancilla
/// `k` is bit `k` of the syndrome nibble, which sits below the data bits.
pub fn ancilla_qubit(k: usize) -> usize {
    N_TOTAL - 1 - k
}

fn check_data_dim(rho5: &DensityMatrix, context: &'static str) -> Result<()> {
    if rho5.dim() != DIM_DATA {
        return Err(Error::DimensionMismatch {
            context,
            expected: DIM_DATA,
            found: rho5.dim(),
        });
    }
    Ok(())
}

/// `rho ⊗ (|+><+|)^⊗4`.
fn adjoin_ancillas(rho5: &DensityMatrix) -> CMatrix {
    let plus4 = CMatrix::from_element(1 << N_ANCILLA, 1 << N_ANCILLA, C64::new(1.0 / 16.0, 0.0));
    rho5.matrix().kronecker(&plus4)
}

/// Coherent syndrome recording on the 9-qubit register.
#[derive(Debug, Clone)]
pub struct SyndromeExtraction {
    controlled: Monomial,
}

impl SyndromeExtraction {
    pub fn new(tables: &CodeTables) -> Self {
        let stabilizers = tables.stabilizers();
        let controlled = Monomial::from_fn(DIM_TOTAL, |j| {
            let (data, syndrome) = (j >> N_ANCILLA, j & (N_SYNDROMES - 1));
            let applied = (0..N_ANCILLA)
                .filter(|k| syndrome >> k & 1 == 1)
                .fold(PauliString::identity(N_DATA), |acc, k| stabilizers[k] * acc);
            let (target, phase) = applied.apply_to_basis(data);
            ((target << N_ANCILLA) | syndrome, phase)
        });
        Self { controlled }
    }

    /// Structured `U rho U^dagger` on the 512-dim register.
    pub fn apply(&self, big: &CMatrix) -> CMatrix {
        let mut out = self.controlled.conjugate(big);
        let h = gate_entries(&Operator::hadamard());
        for k in 0..N_ANCILLA {
            conjugate_single_qubit(&mut out, N_TOTAL, ancilla_qubit(k), &h);
        }
        out
    }

    /// Dense extraction unitary assembled from Kronecker products of the
    /// stabilizer matrices and ancilla projectors.
    pub fn dense(tables: &CodeTables) -> Operator {
        let id2 = Operator::identity(2);
        let ancilla_factor = |k: usize, op: Operator| {
            let mut factors = vec![id2.clone(); N_ANCILLA];
            factors[ancilla_qubit(k) - N_DATA] = op;
            kron_all(&factors)
        };
        let mut u = Operator::identity(DIM_TOTAL);
        for (k, m) in tables.stabilizers().iter().enumerate() {
            let idle = kron_all(&[Operator::identity(DIM_DATA), ancilla_factor(k, Operator::projector(0))]);
            let active = kron_all(&[m.to_operator(), ancilla_factor(k, Operator::projector(1))]);
            let controlled = Operator::new(idle.into_matrix() + active.into_matrix());
            u = &controlled * &u;
        }
        let hadamards = kron_all(&[
            Operator::identity(DIM_DATA),
            Operator::hadamard(),
            Operator::hadamard(),
            Operator::hadamard(),
            Operator::hadamard(),
        ]);
        &hadamards * &u
    }
}

/// The conditional correction, block diagonal in the syndrome register.
#[derive(Debug, Clone)]
pub struct CorrectionOperator {
    monomial: Monomial,
}

impl CorrectionOperator {
    /// Multiplies the sixteen conditional factors in order `M = 0..15`.
    pub fn new(tables: &CodeTables) -> Self {
        let monomial = (0..N_SYNDROMES).fold(Monomial::identity(DIM_TOTAL), |acc, m| {
            let fix = tables.error_for_syndrome(m).adjoint();
            let factor = Monomial::from_fn(DIM_TOTAL, |j| {
                let (data, syndrome) = (j >> N_ANCILLA, j & (N_SYNDROMES - 1));
                if syndrome == m {
                    let (target, phase) = fix.apply_to_basis(data);
                    ((target << N_ANCILLA) | syndrome, phase)
                } else {
                    (j, C64::new(1.0, 0.0))
                }
            });
            acc.compose(&factor)
        });
        Self { monomial }
    }

    pub fn monomial(&self) -> &Monomial {
        &self.monomial
    }

    pub fn to_operator(&self) -> Operator {
        self.monomial.to_operator()
    }

    /// The same product formed from dense 512x512 factors.
    pub fn dense_product(tables: &CodeTables) -> Operator {
        let mut c = Operator::identity(DIM_TOTAL);
        for m in 0..N_SYNDROMES {
            let mut proj = CMatrix::zeros(N_SYNDROMES, N_SYNDROMES);
            proj[(m, m)] = C64::new(1.0, 0.0);
            let rest = CMatrix::identity(N_SYNDROMES, N_SYNDROMES) - &proj;
            let e_dag = tables.error_for_syndrome(m).to_operator().dagger();
            let hit = kron_all(&[e_dag, Operator::new(proj)]);
            let miss = kron_all(&[Operator::identity(DIM_DATA), Operator::new(rest)]);
            let factor = Operator::new(hit.into_matrix() + miss.into_matrix());
            c = &c * &factor;
        }
        c
    }
}

/// Precomputed operators for encoding, correcting and decoding. Immutable
/// after construction and shared freely across threads.
#[derive(Debug)]
pub struct QecEngine {
    tables: CodeTables,
    encoder: EncoderUnitary,
    parity_encoder: EncoderUnitary,
    extraction: SyndromeExtraction,
    correction: CorrectionOperator,
    projectors: Vec<CMatrix>,
    recoveries: Vec<CMatrix>,
    dense_round: OnceLock<Operator>,
}

impl QecEngine {
    pub fn new() -> Result<Self> {
        let tables = CodeTables::new();
        tables.verify()?;
        let encoder = EncoderUnitary::build(&tables, DecoderFrame::Canonical)?;
        let parity_encoder = EncoderUnitary::build(&tables, DecoderFrame::LogicalParity)?;

        let code_projector = tables.zero_l().to_density().into_matrix() + tables.one_l().to_density().into_matrix();
        let mut projectors = Vec::with_capacity(N_SYNDROMES);
        let mut recoveries = Vec::with_capacity(N_SYNDROMES);
        for m in 0..N_SYNDROMES {
            let e = tables.error_for_syndrome(m).to_operator().into_matrix();
            projectors.push(&e * &code_projector * e.adjoint());
            recoveries.push(e.adjoint());
        }
        let total = projectors
            .iter()
            .fold(CMatrix::zeros(DIM_DATA, DIM_DATA), |acc, p| acc + p);
        let residual = max_abs_diff(&total, &CMatrix::identity(DIM_DATA, DIM_DATA));
        if residual > 1e-12 {
            return Err(Error::TableInconsistent(format!(
                "syndrome projectors do not resolve the identity (residual {residual:e})"
            )));
        }

        Ok(Self {
            extraction: SyndromeExtraction::new(&tables),
            correction: CorrectionOperator::new(&tables),
            tables,
            encoder,
            parity_encoder,
            projectors,
            recoveries,
            dense_round: OnceLock::new(),
        })
    }

    /// Process-wide engine for the standard code.
    pub fn standard() -> &'static QecEngine {
        static ENGINE: OnceLock<QecEngine> = OnceLock::new();
        ENGINE.get_or_init(|| QecEngine::new().expect("standard five-qubit code tables are consistent"))
    }

    pub fn tables(&self) -> &CodeTables {
        &self.tables
    }

    pub fn extraction(&self) -> &SyndromeExtraction {
        &self.extraction
    }

    pub fn correction(&self) -> &CorrectionOperator {
        &self.correction
    }

    pub fn encoder(&self, frame: DecoderFrame) -> &EncoderUnitary {
        match frame {
            DecoderFrame::Canonical => &self.encoder,
            DecoderFrame::LogicalParity => &self.parity_encoder,
        }
    }

    pub fn encode(&self, psi: &PureState) -> Result<PureState> {
        encode(&self.tables, psi)
    }

    pub fn decode(&self, rho5: &DensityMatrix) -> Result<DensityMatrix> {
        self.encoder.decode(rho5)
    }

    pub fn decode_with(&self, frame: DecoderFrame, rho5: &DensityMatrix) -> Result<DensityMatrix> {
        self.encoder(frame).decode(rho5)
    }

    /// Ancilla-based round on the 512-dim register, structured path.
    pub fn round_ancilla(&self, rho5: &DensityMatrix) -> Result<DensityMatrix> {
        check_data_dim(rho5, "qec_round_ancilla")?;
        let recorded = self.extraction.apply(&adjoin_ancillas(rho5));
        let corrected = self.correction.monomial.conjugate(&recorded);
        partial_trace(
            &DensityMatrix::from_matrix_unchecked(corrected),
            N_TOTAL,
            &[0, 1, 2, 3, 4],
        )
    }

    /// Dense product of the extraction and correction unitaries.
    pub fn dense_round_operator(&self) -> &Operator {
        self.dense_round.get_or_init(|| {
            let extract = SyndromeExtraction::dense(&self.tables);
            let correct = CorrectionOperator::dense_product(&self.tables);
            &correct * &extract
        })
    }

    /// Ancilla-based round by dense 512x512 multiplication. Slow; kept as the
    /// oracle for [`QecEngine::round_ancilla`].
    pub fn round_ancilla_dense(&self, rho5: &DensityMatrix) -> Result<DensityMatrix> {
        check_data_dim(rho5, "qec_round_ancilla_dense")?;
        let w = self.dense_round_operator().matrix();
        let big = w * adjoin_ancillas(rho5) * w.adjoint();
        partial_trace(&DensityMatrix::from_matrix_unchecked(big), N_TOTAL, &[0, 1, 2, 3, 4])
    }

    /// Syndrome outcome probabilities read off the ancilla register after
    /// extraction.
    pub fn syndrome_probabilities(&self, rho5: &DensityMatrix) -> Result<[f64; N_SYNDROMES]> {
        check_data_dim(rho5, "syndrome_probabilities")?;
        let recorded = self.extraction.apply(&adjoin_ancillas(rho5));
        let mut probs = [0.0; N_SYNDROMES];
        for (i, p) in recorded.diagonal().iter().enumerate() {
            probs[i & (N_SYNDROMES - 1)] += p.re;
        }
        Ok(probs)
    }

    /// Projective round `sum_M E_M^dagger P_M rho P_M E_M`, with `P_M` the
    /// projector onto `span{E_M|0>_L, E_M|1>_L}`.
    pub fn round_projective(&self, rho5: &DensityMatrix) -> Result<DensityMatrix> {
        check_data_dim(rho5, "qec_round_projective")?;
        let rho = rho5.matrix();
        let out =
            self.projectors
                .iter()
                .zip(&self.recoveries)
                .fold(CMatrix::zeros(DIM_DATA, DIM_DATA), |acc, (p, r)| {
                    let branch = r * p * rho * p * r.adjoint();
                    acc + branch
                });
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }
}

pub fn qec_round_ancilla(rho5: &DensityMatrix) -> Result<DensityMatrix> {
    QecEngine::standard().round_ancilla(rho5)
}

pub fn qec_round_projective(rho5: &DensityMatrix) -> Result<DensityMatrix> {
    QecEngine::standard().round_projective(rho5)
}
