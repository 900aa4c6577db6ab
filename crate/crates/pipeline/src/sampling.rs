//! Seeded selection of subtrees for the independent re-search.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_1354;

/// Sorted subtree indices: `ceil(rate * total)` of them, at least one when `total > 0`.
pub fn select(total: usize, rate: f64, seed: u64) -> Vec<usize> {
    if total == 0 {
        return Vec::new();
    }
    let k = ((rate.clamp(0.0, 1.0) * total as f64).ceil() as usize).clamp(1, total);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample(&mut rng, total, k).into_vec();
    picked.sort_unstable();
    picked
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_bounded() {
        assert_eq!(select(1000, 0.01, 7), select(1000, 0.01, 7));
        assert_eq!(select(1000, 0.01, 7).len(), 10);
        assert_eq!(select(5, 0.0, 1).len(), 1);
        assert_eq!(select(5, 1.0, 1), vec![0, 1, 2, 3, 4]);
        assert!(select(0, 0.5, 1).is_empty());
    }
}
