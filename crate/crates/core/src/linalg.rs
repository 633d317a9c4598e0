//! Dense complex linear algebra over multi-qubit Hilbert spaces.
//!
//! Qubit 0 is the leftmost tensor factor and owns the most significant bit
//! of a basis index. All matrices are stored densely; the structured
//! bit-indexed routines in [`crate::structured`] are checked against these.

use std::fmt;
use std::ops::Mul;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Tolerance for algebraic identities (unitarity, trace, Hermiticity).
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a positive semidefinite matrix.
pub const PSD_FLOOR: f64 = -1e-10;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Number of qubits spanned by `dim`, if it is a power of two >= 2.
pub fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim >= 2 && dim.is_power_of_two() {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(Error::NotPowerOfTwo(dim))
    }
}

/// Largest elementwise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest elementwise modulus of `m - m^dagger`.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for c in 0..n {
        for r in c..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Normalized pure state on `n >= 1` qubits.
#[derive(Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        qubits_for_dim(amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        qubits_for_dim(amplitudes.len())?;
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    /// Computational basis state `|index>` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let dim = 1usize << n_qubits;
        assert!(n_qubits >= 1 && index < dim, "basis index out of range");
        let mut amplitudes = CVector::zeros(dim);
        amplitudes[index] = ONE;
        Self { amplitudes }
    }

    /// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self {
            amplitudes: CVector::from_vec(vec![C64::new(c, 0.0), C64::from_polar(s, phi)]),
        }
    }

    /// `(|0> + |1>)/sqrt2`, the ground state of the charge qubit.
    pub fn plus() -> Self {
        Self::from_bloch(std::f64::consts::FRAC_PI_2, 0.0)
    }

    /// `(|0> - |1>)/sqrt2`, the excited state of the charge qubit.
    pub fn minus() -> Self {
        Self::from_bloch(std::f64::consts::FRAC_PI_2, std::f64::consts::PI)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(&self.amplitudes * self.amplitudes.adjoint())
    }
}

impl fmt::Debug for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PureState")
            .field("amplitudes", &self.amplitudes.as_slice())
            .finish()
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix over `n` qubits.
///
/// Construction checks Hermiticity and trace; positivity is checked only by
/// [`DensityMatrix::validate`] since it needs an eigendecomposition.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    elements: CMatrix,
}

impl DensityMatrix {
    pub fn new(elements: CMatrix) -> Result<Self> {
        if !elements.is_square() {
            return Err(Error::NotSquare {
                rows: elements.nrows(),
                cols: elements.ncols(),
            });
        }
        qubits_for_dim(elements.nrows())?;
        let rho = Self { elements };
        rho.validate(false)?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(elements: CMatrix) -> Self {
        debug_assert!(elements.is_square());
        Self { elements }
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self::from_matrix_unchecked(CMatrix::identity(dim, dim).unscale(dim as f64))
    }

    /// Checks the Hermiticity and trace invariants, plus positivity when
    /// `check_psd` is set.
    pub fn validate(&self, check_psd: bool) -> Result<()> {
        let residual = hermiticity_residual(&self.elements);
        if residual > ALGEBRA_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let trace = self.trace();
        if (trace.re - 1.0).abs() > ALGEBRA_TOL || trace.im.abs() > ALGEBRA_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        if check_psd {
            let min_eigenvalue = self.min_eigenvalue();
            if min_eigenvalue < PSD_FLOOR {
                return Err(Error::NotPositive { min_eigenvalue });
            }
        }
        Ok(())
    }

    pub fn trace(&self) -> C64 {
        self.elements.trace()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.elements)[0]
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.elements
    }

    pub fn into_matrix(self) -> CMatrix {
        self.elements
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::from_matrix_unchecked(self.elements.kronecker(&other.elements))
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix{}", self.elements)
    }
}

/// General complex matrix: gates, Kraus operators, isometries.
#[derive(Clone, PartialEq)]
pub struct Operator {
    elements: CMatrix,
}

impl Operator {
    pub fn new(elements: CMatrix) -> Self {
        Self { elements }
    }

    pub fn from_row_slice(rows: usize, cols: usize, data: &[C64]) -> Self {
        Self::new(CMatrix::from_row_slice(rows, cols, data))
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(CMatrix::identity(dim, dim))
    }

    pub fn pauli_x() -> Self {
        Self::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    pub fn pauli_y() -> Self {
        Self::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
    }

    pub fn pauli_z() -> Self {
        Self::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }

    /// Basis change taking `|0>, |1>` to `|+>, |->`.
    pub fn hadamard() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::from_row_slice(2, 2, &[h, h, h, -h])
    }

    /// Projector `|k><k|` on a single qubit.
    pub fn projector(k: usize) -> Self {
        let mut m = CMatrix::zeros(2, 2);
        m[(k, k)] = ONE;
        Self::new(m)
    }

    pub fn rows(&self) -> usize {
        self.elements.nrows()
    }

    pub fn cols(&self) -> usize {
        self.elements.ncols()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.elements
    }

    pub fn into_matrix(self) -> CMatrix {
        self.elements
    }

    pub fn dagger(&self) -> Operator {
        Self::new(self.elements.adjoint())
    }

    /// `max |U^dagger U - I|`; zero for an exact isometry.
    pub fn isometry_residual(&self) -> f64 {
        let gram = self.elements.adjoint() * &self.elements;
        let id = CMatrix::identity(self.cols(), self.cols());
        max_abs_diff(&gram, &id)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.rows() == self.cols() && self.isometry_residual() <= tol
    }

    pub fn apply(&self, psi: &CVector) -> CVector {
        &self.elements * psi
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator{}", self.elements)
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        Operator::new(&self.elements * &rhs.elements)
    }
}

/// Kronecker product `a ⊗ b`; `a` owns the high bits of the result index.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    Operator::new(a.elements.kronecker(&b.elements))
}

/// Left-to-right Kronecker product of `factors`.
pub fn kron_all(factors: &[Operator]) -> Operator {
    let (first, rest) = factors.split_first().expect("kron_all needs at least one factor");
    rest.iter().fold(first.clone(), |acc, f| kron(&acc, f))
}

/// Elementwise product of two equally sized square matrices.
pub fn hadamard_product(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            context: "hadamard_product",
            expected: a.nrows(),
            found: b.nrows().max(b.ncols()),
        });
    }
    Ok(a.component_mul(b))
}

/// Reduced state on the qubits in `keep`. The kept qubits stay in register
/// order regardless of the order they are listed in.
pub fn partial_trace(rho: &DensityMatrix, n_qubits: usize, keep: &[usize]) -> Result<DensityMatrix> {
    if rho.dim() != 1usize << n_qubits {
        return Err(Error::DimensionMismatch {
            context: "partial_trace",
            expected: 1usize << n_qubits,
            found: rho.dim(),
        });
    }
    if keep.is_empty() {
        return Err(Error::EmptySubsystem);
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    for w in kept.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateQubit(w[0]));
        }
    }
    if let Some(&bad) = kept.iter().find(|&&q| q >= n_qubits) {
        return Err(Error::InvalidQubitIndex { index: bad, n_qubits });
    }
    if kept.len() == n_qubits {
        return Ok(rho.clone());
    }
    let traced: Vec<usize> = (0..n_qubits).filter(|q| !kept.contains(q)).collect();

    // Scatter a compact index over a subset of qubits into a full register index.
    let scatter = |qubits: &[usize]| -> Vec<usize> {
        (0..1usize << qubits.len())
            .map(|compact| {
                qubits.iter().enumerate().fold(0usize, |full, (pos, &q)| {
                    let bit = (compact >> (qubits.len() - 1 - pos)) & 1;
                    full | (bit << (n_qubits - 1 - q))
                })
            })
            .collect()
    };
    let kept_idx = scatter(&kept);
    let traced_idx = scatter(&traced);

    let m = rho.matrix();
    let dk = kept_idx.len();
    let out = CMatrix::from_fn(dk, dk, |i, j| {
        traced_idx.iter().map(|&t| m[(kept_idx[i] | t, kept_idx[j] | t)]).sum()
    });
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// `u rho u^dagger` for an isometry `u` (checked to [`ALGEBRA_TOL`]).
pub fn conjugate(rho: &DensityMatrix, u: &Operator) -> Result<DensityMatrix> {
    if u.cols() != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "conjugate",
            expected: rho.dim(),
            found: u.cols(),
        });
    }
    qubits_for_dim(u.rows())?;
    let residual = u.isometry_residual();
    if residual > ALGEBRA_TOL {
        return Err(Error::NotIsometry { residual });
    }
    Ok(conjugate_trusted(rho, u))
}

/// [`conjugate`] without the isometry check, for operators validated at
/// construction.
pub(crate) fn conjugate_trusted(rho: &DensityMatrix, u: &Operator) -> DensityMatrix {
    let left = u.matrix() * rho.matrix();
    DensityMatrix::from_matrix_unchecked(left * u.matrix().adjoint())
}

/// `sqrt(<psi|rho|psi>)`, with negative rounding dust clamped to zero.
pub fn fidelity_pure(psi: &PureState, rho: &DensityMatrix) -> Result<f64> {
    if psi.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "fidelity_pure",
            expected: rho.dim(),
            found: psi.dim(),
        });
    }
    let a = psi.amplitudes();
    let overlap = a.dotc(&(rho.matrix() * a)).re;
    Ok(overlap.max(0.0).sqrt())
}
