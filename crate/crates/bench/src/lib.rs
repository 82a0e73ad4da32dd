//! Shared instance builders for the benchmark targets.

use cba_core::geometry::LiftedVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_lifted(n: usize, seed: u64) -> LiftedVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    LiftedVector::new(
        rng.random_range(-5.0..5.0),
        (0..n).map(|_| rng.random_range(-5.0..5.0)).collect(),
    )
}

pub fn random_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}
