//! Seed derivation for independent, order-free random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// SplitMix64 finalizer; a stable bijective mix of 64-bit words.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Combine a parent seed with a child key into a new seed.
pub fn derive_seed(parent: u64, key: u64) -> u64 {
    mix64(mix64(parent) ^ key.rotate_left(17) ^ 0x5851_f42d_4c95_7f2d)
}

/// Named sub-streams of one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Orbit = 1,
    Maneuver = 2,
    Jammer = 3,
    LinkJitter = 4,
    Estimation = 5,
}

pub fn stream(seed: u64, which: Stream) -> SimRng {
    SimRng::seed_from_u64(derive_seed(seed, which as u64))
}

pub fn seeded(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}
