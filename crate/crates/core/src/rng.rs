//! Deterministic random substreams.
//!
//! Every random draw in a sweep comes from a ChaCha stream whose seed is a
//! hash of a path such as `(seed, chain, iteration, block, index)`. Draws are
//! therefore reproducible regardless of how work is spread over threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A node in the tree of substreams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey(u64);

impl StreamKey {
    pub fn new(seed: u64) -> Self {
        StreamKey(splitmix64(seed))
    }

    pub fn child(self, tag: u64) -> Self {
        StreamKey(splitmix64(self.0 ^ splitmix64(tag.wrapping_add(0x632B_E59B_D9B4_E019))))
    }

    pub fn rng(self) -> Stream {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// Block tags used within one sweep.
pub mod tag {
    pub const TAU: u64 = 1;
    pub const LOCAL: u64 = 2;
    pub const OMEGA: u64 = 3;
    pub const BETA_DATA: u64 = 4;
    pub const BETA_PRIOR: u64 = 5;
    pub const SUN: u64 = 6;
    pub const INIT: u64 = 7;
    pub const SIM_COLUMN: u64 = 8;
    pub const SIM_OUTCOME: u64 = 9;
    pub const SIM_FREQUENCY: u64 = 10;
}

/// Keys for the chain-level and iteration-level streams.
pub fn chain_key(seed: u64, chain: usize) -> StreamKey {
    StreamKey::new(seed).child(chain as u64)
}

pub fn iteration_key(seed: u64, chain: usize, iteration: usize) -> StreamKey {
    chain_key(seed, chain).child(iteration as u64)
}
