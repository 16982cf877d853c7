//! Deterministic seed derivation for parallel replication.
//!
//! All stochastic routines in this crate take a `u64` seed and derive any
//! sub-streams (bootstrap replicates, Monte Carlo replications, quantile
//! draws) through [`derive_seed`]. Results therefore do not depend on the
//! evaluation schedule: replicate `i` sees the same stream whether it runs
//! first, last, or on another thread.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer; decorrelates consecutive counter values.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent sub-seed from a base seed and a stream index.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    splitmix64(base ^ splitmix64(stream))
}

/// Seeded generator used throughout the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
