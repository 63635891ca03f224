//! Seeded, splittable random streams.
//!
//! Every stochastic operator takes its stream as an explicit `&mut R` argument;
//! a run owns exactly one [`EvoRng`] created from its seed. Independent
//! replications and Monte Carlo trials use [`stream`] so that trial `k` does not
//! depend on how many numbers trial `k - 1` consumed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the crate.
pub type EvoRng = ChaCha8Rng;

/// Generator for a run seed.
pub fn seeded(seed: u64) -> EvoRng {
    EvoRng::seed_from_u64(seed)
}

/// Independent sub-stream `index` of `seed`.
pub fn stream(seed: u64, index: u64) -> EvoRng {
    let mut rng = EvoRng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Derives the seed of replication `index` from a base seed (splitmix64 step).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
