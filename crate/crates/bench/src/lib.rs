//! Shared fixtures for the benchmarks.

use qec5_core::{CMatrix, DensityMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded full-rank 5-qubit state.
pub fn fixture_state(seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(32, 32, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    let rho = rho.map(|v| v / tr);
    DensityMatrix::new((&rho + rho.adjoint()).scale(0.5)).expect("fixture is a valid state")
}
