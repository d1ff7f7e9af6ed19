//! Deterministic per-trial random streams.
//!
//! Trial `i` of a run always draws from `ChaCha8Rng` seeded with
//! `mix(master_seed, i)`, so results depend only on `(master_seed, i)` and
//! never on scheduling or worker count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer over `master + GOLDEN * (trial + 1)`: a fixed
/// 64-bit avalanche so that nearby trial indices land on unrelated seeds.
pub fn mix_seed(master: u64, trial: u64) -> u64 {
    let mut z = master.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(trial.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The exclusively owned random stream for one trial.
pub fn trial_rng(master: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(master, trial))
}
