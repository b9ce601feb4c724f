//! Seeded randomness. Every random draw in the crate flows from a `u64`
//! seed through [`seeded_rng`]; independent streams are split off with
//! [`derive_seed`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed for stream `index` of `seed`.
///
/// The derivation is a fixed SplitMix64 mix of both inputs, so it is
/// stable across platforms and releases.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ index.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

/// Derive along a path of indices, e.g. `[cell, repetition]`.
pub fn derive_path(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(seed, |s, &i| derive_seed(s, i))
}
