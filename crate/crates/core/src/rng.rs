//! Seeded, portable randomness.
//!
//! Every random stream is a [`ChaCha8Rng`] seeded through
//! `SeedableRng::seed_from_u64`. Sub-streams are identified by a tuple of
//! integers and derived from a master seed with [`derive_seed`], so a run's
//! randomness depends only on its identity, never on scheduling order.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Stream tags used by the experiment harness.
pub mod tag {
    pub const GRAPH: u64 = 0x4752_4150_4800_0001;
    pub const PARTITION: u64 = 0x5041_5254_0000_0002;
    pub const GSEMO: u64 = 0x4753_454d_4f00_0003;
}

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `h_0 = splitmix64(master)`, `h_{i+1} = splitmix64(h_i ^ splitmix64(part_i))`.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(master), |h, &p| splitmix64(h ^ splitmix64(p)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
