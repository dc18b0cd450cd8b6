//! Seed derivation. Every random draw in the crate comes from a ChaCha8
//! stream keyed by an explicit 64-bit seed, and child seeds are derived by
//! SplitMix64 mixing so results never depend on thread scheduling.
//!
//! `derive(parent, tag)` is `splitmix64(parent ^ splitmix64(tag + GOLDEN))`.
//! A realization seed is
//! `derive(derive(derive(master, GRID), grid_index), realization_index)`
//! with `GRID = 0x6772_6964` ("grid").

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stream tags for the independent random components of one realization.
pub mod stream {
    pub const GRID: u64 = 0x6772_6964;
    pub const TOPOLOGY: u64 = 0x746f_706f;
    pub const ASSIGNMENT: u64 = 0x6173_676e;
    pub const RANK: u64 = 0x7261_6e6b;
    pub const NUMERIC: u64 = 0x6e75_6d65;
    pub const LINKS: u64 = 0x6c69_6e6b;
}

#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
pub fn derive(parent: u64, tag: u64) -> u64 {
    splitmix64(parent ^ splitmix64(tag.wrapping_add(GOLDEN)))
}

pub fn realization_seed(master: u64, grid_index: u64, realization: u64) -> u64 {
    derive(derive(derive(master, stream::GRID), grid_index), realization)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
