use crate::error::{Error, Result};
use crate::linalg::{CVector, PureState, C64};
use crate::pauli::{Pauli, PauliError, PauliString};

pub const N_DATA: usize = 5;
pub const N_SYNDROMES: usize = 16;

// Basis strings of the logical codewords, qubit 0 leftmost.
const ZERO_L_PLUS: [&str; 6] = ["00000", "11000", "01100", "00110", "00011", "10001"];
const ZERO_L_MINUS: [&str; 10] = [
    "10100", "01010", "00101", "10010", "01001", "11110", "01111", "10111", "11011", "11101",
];
const ONE_L_PLUS: [&str; 6] = ["11111", "00111", "10011", "11001", "11100", "01110"];
const ONE_L_MINUS: [&str; 10] = [
    "01011", "10101", "11010", "01101", "10110", "00001", "10000", "01000", "00100", "00010",
];

use Pauli::{I, X, Z};

const STABILIZER_FACTORS: [[Pauli; 5]; 4] = [[I, Z, X, X, Z], [Z, I, Z, X, X], [X, Z, I, Z, X], [X, X, Z, I, Z]];

/// Correction `E_M` for syndrome `M = M3 M2 M1 M0`.
const SYNDROME_TABLE: [&str; N_SYNDROMES] = [
    "I", "Z2", "X0", "Z3", "X3", "X1", "Z4", "Y3", "Z1", "X4", "X2", "Y2", "Z0", "Y1", "Y0", "Y4",
];

fn codeword(plus: &[&str], minus: &[&str]) -> PureState {
    let mut amplitudes = CVector::zeros(1 << N_DATA);
    for (strings, sign) in [(plus, 0.25), (minus, -0.25)] {
        for s in strings {
            let idx = usize::from_str_radix(s, 2).expect("codeword literal");
            amplitudes[idx] += C64::new(sign, 0.0);
        }
    }
    PureState::new(amplitudes).expect("codeword literal is normalized")
}

/// The DiVincenzo-Shor five-qubit code: codewords, stabilizer generators
/// `M0..M3` and the syndrome lookup table.
#[derive(Debug, Clone)]
pub struct CodeTables {
    zero_l: PureState,
    one_l: PureState,
    stabilizers: [PauliString; 4],
    syndrome_table: [PauliError; N_SYNDROMES],
}

impl Default for CodeTables {
    fn default() -> Self {
        Self::new()
    }
}

impl CodeTables {
    pub fn new() -> Self {
        Self {
            zero_l: codeword(&ZERO_L_PLUS, &ZERO_L_MINUS),
            one_l: codeword(&ONE_L_PLUS, &ONE_L_MINUS),
            stabilizers: STABILIZER_FACTORS.map(|f| PauliString::from_factors(&f)),
            syndrome_table: SYNDROME_TABLE.map(|s| s.parse().expect("syndrome table literal")),
        }
    }

    pub fn zero_l(&self) -> &PureState {
        &self.zero_l
    }

    pub fn one_l(&self) -> &PureState {
        &self.one_l
    }

    pub fn codeword(&self, bit: usize) -> &PureState {
        match bit {
            0 => &self.zero_l,
            1 => &self.one_l,
            _ => panic!("logical bit must be 0 or 1"),
        }
    }

    pub fn stabilizers(&self) -> &[PauliString; 4] {
        &self.stabilizers
    }

    pub fn syndrome_table(&self) -> &[PauliError; N_SYNDROMES] {
        &self.syndrome_table
    }

    /// `E_M` as a Pauli string on the data register.
    pub fn error_for_syndrome(&self, syndrome: usize) -> PauliString {
        self.syndrome_table[syndrome].to_string_on(N_DATA)
    }

    /// Syndrome of a single-qubit error: bit `k` is set iff the error
    /// anticommutes with stabilizer `M_k`.
    pub fn syndrome_of(&self, error: PauliError) -> Result<usize> {
        if error.pauli != Pauli::I && error.qubit >= N_DATA {
            return Err(Error::InvalidPauliLabel(error.to_string()));
        }
        let e = error.to_string_on(N_DATA);
        Ok(self
            .stabilizers
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.commutes_with(&e))
            .fold(0, |acc, (k, _)| acc | 1 << k))
    }

    /// Checks every structural invariant of the code and returns the largest
    /// numerical residual seen.
    pub fn verify(&self) -> Result<f64> {
        let mut worst = 0.0f64;

        let overlaps = [
            (self.zero_l.inner(&self.zero_l), 1.0),
            (self.one_l.inner(&self.one_l), 1.0),
            (self.zero_l.inner(&self.one_l), 0.0),
        ];
        for (v, expected) in overlaps {
            worst = worst.max((v - C64::new(expected, 0.0)).norm());
        }

        for (k, m) in self.stabilizers.iter().enumerate() {
            let dense = m.to_operator();
            let sq = &dense * &dense;
            worst = worst.max(crate::linalg::max_abs_diff(
                sq.matrix(),
                &crate::linalg::CMatrix::identity(32, 32),
            ));
            for other in &self.stabilizers[k + 1..] {
                let od = other.to_operator();
                let comm = (&dense * &od).into_matrix() - (&od * &dense).into_matrix();
                worst = worst.max(comm.iter().map(|v| v.norm()).fold(0.0, f64::max));
            }
            for word in [&self.zero_l, &self.one_l] {
                let image = dense.apply(word.amplitudes());
                worst = worst.max((image - word.amplitudes()).camax());
            }
        }
        if worst > 1e-12 {
            return Err(Error::TableInconsistent(format!("algebraic residual {worst:e}")));
        }

        let mut seen = [false; N_SYNDROMES];
        for (m, e) in self.syndrome_table.iter().enumerate() {
            let s = self.syndrome_of(*e)?;
            if s != m {
                return Err(Error::TableInconsistent(format!(
                    "{e} has syndrome {s} but is listed under {m}"
                )));
            }
            seen[s] = true;
        }
        let singles = (0..N_DATA).flat_map(|q| [Pauli::X, Pauli::Y, Pauli::Z].map(|p| PauliError::new(p, q)));
        for e in singles.chain([PauliError::IDENTITY]) {
            if !self.syndrome_table.contains(&e) {
                return Err(Error::TableInconsistent(format!("{e} missing from the table")));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::TableInconsistent("syndromes are not all distinct".into()));
        }
        Ok(worst)
    }
}
