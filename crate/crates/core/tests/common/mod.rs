#![allow(dead_code)]

use nalgebra::DMatrix;
use qec5_core::{CMatrix, DensityMatrix, PureState, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_like(rng: &mut impl Rng) -> f64 {
    rng.gen_range(-1.0..1.0)
}

/// Full-rank random state, `G G^dagger / tr`.
pub fn random_density(rng: &mut impl Rng, n_qubits: usize) -> DensityMatrix {
    let d = 1 << n_qubits;
    let g: CMatrix = DMatrix::from_fn(d, d, |_, _| C64::new(gaussian_like(rng), gaussian_like(rng)));
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    let rho = rho.map(|v| v / tr);
    let rho = (&rho + rho.adjoint()).scale(0.5);
    DensityMatrix::new(rho).expect("random density is valid")
}

pub fn random_pure(rng: &mut impl Rng, n_qubits: usize) -> PureState {
    let d = 1 << n_qubits;
    let v = nalgebra::DVector::from_fn(d, |_, _| C64::new(gaussian_like(rng), gaussian_like(rng)));
    PureState::normalized(v).expect("nonzero vector")
}

pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
}
