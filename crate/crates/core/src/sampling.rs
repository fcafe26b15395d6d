//! Seeded random sparse vectors.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::vector::SparseVector;

/// Coefficient alphabet: small enough that modulus ties are frequent, which
/// exercises the tie enumeration.
pub const LEVELS: [f64; 8] = [-2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0];

/// `count` vectors with support size uniform in `1..=max_support` drawn from
/// `1..=horizon`, coefficients uniform in [`LEVELS`].
pub fn random_sample(seed: u64, count: usize, max_support: usize, horizon: usize) -> Vec<SparseVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_support = max_support.min(horizon).max(1);
    let pool: Vec<usize> = (1..=horizon).collect();
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=max_support);
            let idx: Vec<usize> = pool.choose_multiple(&mut rng, k).copied().collect();
            let pairs = idx
                .into_iter()
                .map(|n| (n, *LEVELS.choose(&mut rng).expect("nonempty")));
            SparseVector::from_pairs(pairs).expect("distinct positive indices")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_range() {
        let a = random_sample(7, 50, 8, 16);
        let b = random_sample(7, 50, 8, 16);
        assert_eq!(a, b);
        assert_ne!(a, random_sample(8, 50, 8, 16));
        for x in &a {
            assert!(!x.is_empty() && x.len() <= 8);
            assert!(x.max_index().unwrap() <= 16);
        }
    }
}
