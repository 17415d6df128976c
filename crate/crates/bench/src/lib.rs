//! Fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crdyn_core::audit::random_relation;
use crdyn_core::FiniteRelation;

/// `count` seeded random relations on exactly `n` points.
pub fn random_relations(n: usize, count: usize, seed: u64) -> Vec<FiniteRelation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_relation(n, &mut rng)).collect()
}
