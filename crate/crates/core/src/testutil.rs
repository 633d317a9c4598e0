use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{CMatrix, DensityMatrix, Operator, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_complex_matrix(rng: &mut impl Rng, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Full-rank random state `G G^dagger / tr`.
pub fn random_density(rng: &mut impl Rng, n_qubits: usize) -> DensityMatrix {
    let g = random_complex_matrix(rng, 1 << n_qubits);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let mut m = m.unscale(tr);
    // Symmetrize away rounding so the Hermiticity check is exact.
    let adj = m.adjoint();
    m = (m + adj).unscale(2.0);
    DensityMatrix::new(m).expect("random density matrix")
}

pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> Operator {
    let q = random_complex_matrix(rng, dim).qr().q();
    Operator::new(q)
}
