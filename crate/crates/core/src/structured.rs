//! Bit-indexed application of structured operators to density matrices.
//!
//! Pauli strings, controlled Paulis and the conditional-correction product
//! are monomial matrices (one nonzero per column), so conjugating by them is
//! an index permutation with phases. Single-qubit gates touch index pairs
//! differing in one bit. Both run in O(dim^2) instead of the O(dim^3) dense
//! product kept in [`crate::linalg`] as the oracle.

use crate::linalg::{CMatrix, Operator, C64, ZERO};
use crate::pauli::PauliString;

/// Basis-index bit owned by `qubit` in an `n_qubits` register.
#[inline]
pub fn qubit_mask(n_qubits: usize, qubit: usize) -> usize {
    1usize << (n_qubits - 1 - qubit)
}

/// A matrix with exactly one nonzero entry per column: column `j` holds
/// `phase[j]` in row `target[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    target: Vec<usize>,
    phase: Vec<C64>,
}

impl Monomial {
    pub fn identity(dim: usize) -> Self {
        Self {
            target: (0..dim).collect(),
            phase: vec![C64::new(1.0, 0.0); dim],
        }
    }

    pub fn from_pauli(p: &PauliString) -> Self {
        let dim = 1usize << p.n_qubits();
        let (target, phase) = (0..dim).map(|j| p.apply_to_basis(j)).unzip();
        Self { target, phase }
    }

    /// Builds a monomial from a per-column map `j -> (row, coefficient)`.
    pub fn from_fn(dim: usize, f: impl Fn(usize) -> (usize, C64)) -> Self {
        let (target, phase) = (0..dim).map(f).unzip();
        let m = Self { target, phase };
        debug_assert!(m.is_permutation());
        m
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    #[inline]
    pub fn apply_to_basis(&self, j: usize) -> (usize, C64) {
        (self.target[j], self.phase[j])
    }

    fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.dim()];
        self.target
            .iter()
            .all(|&t| t < seen.len() && !std::mem::replace(&mut seen[t], true))
    }

    /// `self * other`.
    pub fn compose(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.dim(), other.dim());
        Self::from_fn(self.dim(), |j| {
            let (mid, a) = other.apply_to_basis(j);
            let (t, b) = self.apply_to_basis(mid);
            (t, a * b)
        })
    }

    /// True when every phase has unit modulus, i.e. the matrix is unitary.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_permutation() && self.phase.iter().all(|p| (p.norm() - 1.0).abs() <= tol)
    }

    pub fn to_operator(&self) -> Operator {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for j in 0..n {
            m[(self.target[j], j)] = self.phase[j];
        }
        Operator::new(m)
    }

    /// `M rho M^dagger`.
    pub fn conjugate(&self, rho: &CMatrix) -> CMatrix {
        let n = self.dim();
        assert_eq!(rho.shape(), (n, n), "monomial conjugation shape mismatch");
        let mut out = CMatrix::from_element(n, n, ZERO);
        let src = rho.as_slice();
        let dst = out.as_mut_slice();
        // Column-major storage: element (r, c) lives at c * n + r.
        for j in 0..n {
            let (tj, pj) = (self.target[j], self.phase[j].conj());
            let col = &src[j * n..(j + 1) * n];
            let out_col = tj * n;
            for (i, &v) in col.iter().enumerate() {
                dst[out_col + self.target[i]] = self.phase[i] * v * pj;
            }
        }
        out
    }
}

/// In-place `G rho G^dagger` with `G` acting on `qubit`.
pub fn conjugate_single_qubit(rho: &mut CMatrix, n_qubits: usize, qubit: usize, gate: &[[C64; 2]; 2]) {
    let n = 1usize << n_qubits;
    assert_eq!(rho.shape(), (n, n), "single-qubit conjugation shape mismatch");
    let bit = qubit_mask(n_qubits, qubit);
    let [[g00, g01], [g10, g11]] = *gate;
    let data = rho.as_mut_slice();

    // Left multiplication mixes row pairs inside each column.
    for col in data.chunks_exact_mut(n) {
        for i0 in (0..n).filter(|i| i & bit == 0) {
            let i1 = i0 | bit;
            let (a, b) = (col[i0], col[i1]);
            col[i0] = g00 * a + g01 * b;
            col[i1] = g10 * a + g11 * b;
        }
    }

    // Right multiplication by G^dagger mixes column pairs.
    let (h00, h01, h10, h11) = (g00.conj(), g01.conj(), g10.conj(), g11.conj());
    for j0 in (0..n).filter(|j| j & bit == 0) {
        let j1 = j0 | bit;
        let (lo, hi) = data.split_at_mut(j1 * n);
        let c0 = &mut lo[j0 * n..(j0 + 1) * n];
        let c1 = &mut hi[..n];
        for (a, b) in c0.iter_mut().zip(c1.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = x * h00 + y * h01;
            *b = x * h10 + y * h11;
        }
    }
}

/// Row-major 2x2 entries of a single-qubit operator.
pub fn gate_entries(op: &Operator) -> [[C64; 2]; 2] {
    assert_eq!((op.rows(), op.cols()), (2, 2));
    let m = op.matrix();
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}
