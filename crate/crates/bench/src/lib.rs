//! Shared inputs for the benchmarks.

use greedylab_core::sampling::random_sample;
use greedylab_core::SparseVector;

pub const SEED: u64 = 7;

/// A fixed batch of sparse vectors: support up to `max_support` inside `[1, horizon]`.
pub fn batch(count: usize, max_support: usize, horizon: usize) -> Vec<SparseVector> {
    random_sample(SEED, count, max_support, horizon)
}
