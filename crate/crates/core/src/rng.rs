//! Reproducible random streams.
//!
//! One master seed drives every simulation. Stream `k` is the ChaCha8 generator keyed by
//! `seed_from_u64(master)` with its 64-bit stream id set to `k`, so independent tasks
//! (hypotheses, batches, grid points) never share a sequence and any of them can be
//! regenerated in isolation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

pub fn stream_rng(master: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng
}

/// Packs a (task, sub-task) pair into a stream id. Tasks get disjoint 2³² blocks.
pub fn stream_id(task: u32, index: u32) -> u64 {
    (u64::from(task) << 32) | u64::from(index)
}
