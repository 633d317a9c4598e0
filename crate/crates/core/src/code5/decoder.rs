use crate::error::{Error, Result};
use crate::linalg::{conjugate_trusted, max_abs_diff, partial_trace, CMatrix, DensityMatrix, Operator, PureState};
use crate::pauli::{Pauli, PauliString};

use super::tables::{CodeTables, N_DATA, N_SYNDROMES};

/// How the 32 corrected-error basis states are labelled on decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DecoderFrame {
    /// `|b, M> <-> E_M |b>_L`: decoding undoes every correctable error.
    #[default]
    Canonical,
    /// `|b, M> <-> E_M |b ⊕ f_M>_L` with `f_M = 1` when `E_M` anticommutes
    /// with `Z⊗5`. The logical bit is read from the Z-parity of the
    /// register, so any error built from Z factors leaves it untouched.
    LogicalParity,
}

/// Unitary `U` on 5 qubits mapping `|b⟩ ⊗ |M3 M2 M1 M0⟩` to a
/// (possibly corrupted) codeword; `U^dagger` decodes.
#[derive(Debug, Clone)]
pub struct EncoderUnitary {
    frame: DecoderFrame,
    u: Operator,
}

impl EncoderUnitary {
    pub fn build(tables: &CodeTables, frame: DecoderFrame) -> Result<Self> {
        let z_bar = PauliString::from_factors(&[Pauli::Z; N_DATA]);
        let mut u = CMatrix::zeros(1 << N_DATA, 1 << N_DATA);
        for m in 0..N_SYNDROMES {
            let e = tables.error_for_syndrome(m).to_operator();
            let flip = match frame {
                DecoderFrame::Canonical => 0,
                DecoderFrame::LogicalParity => usize::from(!tables.error_for_syndrome(m).commutes_with(&z_bar)),
            };
            for b in 0..2 {
                let col = e.apply(tables.codeword(b ^ flip).amplitudes());
                u.set_column(Self::column_index(b, m), &col);
            }
        }
        let gram = u.adjoint() * &u;
        let residual = max_abs_diff(&gram, &CMatrix::identity(32, 32));
        if residual > 1e-10 {
            return Err(Error::TableInconsistent(format!(
                "encoder columns are not orthonormal (residual {residual:e})"
            )));
        }
        Ok(Self {
            frame,
            u: Operator::new(u),
        })
    }

    /// Column of `U` holding `E_M |b>_L`: the logical bit is the most
    /// significant qubit, the syndrome the low four bits.
    pub fn column_index(bit: usize, syndrome: usize) -> usize {
        (bit << 4) | syndrome
    }

    pub fn frame(&self) -> DecoderFrame {
        self.frame
    }

    pub fn operator(&self) -> &Operator {
        &self.u
    }

    /// `U^dagger rho U`, then trace out the four syndrome qubits.
    pub fn decode(&self, rho5: &DensityMatrix) -> Result<DensityMatrix> {
        if rho5.dim() != 1 << N_DATA {
            return Err(Error::DimensionMismatch {
                context: "decode",
                expected: 1 << N_DATA,
                found: rho5.dim(),
            });
        }
        let unrotated = conjugate_trusted(rho5, &self.u.dagger());
        partial_trace(&unrotated, N_DATA, &[0])
    }
}

/// Canonical encoder for `tables`.
pub fn build_encoder_unitary(tables: &CodeTables) -> Result<EncoderUnitary> {
    EncoderUnitary::build(tables, DecoderFrame::Canonical)
}

/// `a|0> + b|1>  ->  a|0>_L + b|1>_L`.
pub fn encode(tables: &CodeTables, psi: &PureState) -> Result<PureState> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            context: "encode",
            expected: 2,
            found: psi.dim(),
        });
    }
    let a = psi.amplitudes();
    PureState::normalized(tables.zero_l().amplitudes() * a[0] + tables.one_l().amplitudes() * a[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{fidelity_pure, CVector, C64};
    use std::f64::consts::PI;

    #[test]
    fn encoder_columns() {
        let t = CodeTables::new();
        let enc = build_encoder_unitary(&t).unwrap();
        let u = enc.operator().matrix();
        let col = |b, m| u.column(EncoderUnitary::column_index(b, m)).into_owned();
        assert_eq!(col(0, 0), *t.zero_l().amplitudes());
        let x0 = PauliString::single(5, 0, Pauli::X).to_operator();
        assert_eq!(col(1, 2), x0.apply(t.one_l().amplitudes()));
        assert!(enc.operator().isometry_residual() < 1e-12);
    }

    #[test]
    fn encode_examples() {
        let t = CodeTables::new();
        assert_eq!(encode(&t, &PureState::basis(1, 0)).unwrap(), *t.zero_l());
        assert_eq!(encode(&t, &PureState::basis(1, 1)).unwrap(), *t.one_l());
        let plus = encode(&t, &PureState::plus()).unwrap();
        let expected = (t.zero_l().amplitudes() + t.one_l().amplitudes()).unscale(2f64.sqrt());
        assert!((plus.amplitudes() - expected).camax() < 1e-15);
        assert!((plus.amplitudes().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn decode_round_trip_and_mixed() {
        let t = CodeTables::new();
        let enc = build_encoder_unitary(&t).unwrap();
        for k in 0..7 {
            let psi = PureState::from_bloch(PI * k as f64 / 6.0, 0.9 * k as f64);
            let out = enc.decode(&encode(&t, &psi).unwrap().to_density()).unwrap();
            assert!(max_abs_diff(out.matrix(), psi.to_density().matrix()) < 1e-12);
        }
        let mixed = enc.decode(&DensityMatrix::maximally_mixed(5)).unwrap();
        assert!(max_abs_diff(mixed.matrix(), DensityMatrix::maximally_mixed(1).matrix()) < 1e-15);
    }

    #[test]
    fn canonical_decode_undoes_every_table_error() {
        let t = CodeTables::new();
        let enc = build_encoder_unitary(&t).unwrap();
        for m in 0..N_SYNDROMES {
            let e = t.error_for_syndrome(m).to_operator();
            for i in 0..10 {
                for j in 0..10 {
                    let psi = PureState::from_bloch(PI * i as f64 / 9.0, 2.0 * PI * j as f64 / 10.0);
                    let corrupted = e.apply(encode(&t, &psi).unwrap().amplitudes());
                    let rho = PureState::new(corrupted).unwrap().to_density();
                    let f = fidelity_pure(&psi, &enc.decode(&rho).unwrap()).unwrap();
                    assert!((f - 1.0).abs() < 1e-12, "M={m} grid=({i},{j}) F={f}");
                }
            }
        }
    }

    #[test]
    fn parity_frame_columns_carry_their_logical_parity() {
        let t = CodeTables::new();
        let enc = EncoderUnitary::build(&t, DecoderFrame::LogicalParity).unwrap();
        let z_bar = PauliString::from_factors(&[Pauli::Z; 5]).to_operator();
        for b in 0..2 {
            for m in 0..N_SYNDROMES {
                let col: CVector = enc
                    .operator()
                    .matrix()
                    .column(EncoderUnitary::column_index(b, m))
                    .into_owned();
                let sign = if b == 0 { 1.0 } else { -1.0 };
                assert!((z_bar.apply(&col) - col.map(|v| v * C64::new(sign, 0.0))).camax() < 1e-15);
            }
        }
        // Both frames agree on the code space.
        let canon = build_encoder_unitary(&t).unwrap();
        let psi = PureState::from_bloch(1.0, 1.0);
        let rho = encode(&t, &psi).unwrap().to_density();
        let a = canon.decode(&rho).unwrap();
        let b = enc.decode(&rho).unwrap();
        assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-15);
    }

    #[test]
    fn decode_rejects_wrong_dimension() {
        let enc = build_encoder_unitary(&CodeTables::new()).unwrap();
        assert!(matches!(
            enc.decode(&DensityMatrix::maximally_mixed(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
