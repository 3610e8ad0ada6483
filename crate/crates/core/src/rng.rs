//! Deterministic random-stream derivation.
//!
//! Every randomized task in this crate draws from a ChaCha stream seeded by
//! the position of the task in the experiment grid (master seed, interval
//! index, repeat index, arm index, ...). Seeding is positional, never
//! time- or schedule-based, so reports are bit-identical regardless of how
//! many worker threads execute the grid.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a master seed with positional coordinates into a single substream seed.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    let mut state = master;
    let mut out = splitmix64(&mut state);
    for &part in parts {
        state ^= part;
        out ^= splitmix64(&mut state);
    }
    out
}

/// A seeded stream for the task at the given grid position.
pub fn task_rng(master: u64, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, parts))
}

/// Draws `m` distinct indices from `0..n` (partial Fisher-Yates).
pub fn sample_without_replacement<R: RngExt>(rng: &mut R, n: usize, m: usize) -> Vec<usize> {
    assert!(m <= n, "cannot sample {m} of {n} without replacement");
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..m {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(m);
    pool
}

/// Standard normal draw via Box-Muller.
pub fn standard_normal<R: RngExt>(rng: &mut R) -> f64 {
    // u1 in (0, 1] keeps the log finite.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn derive_seed_separates_coordinates() {
        let a = derive_seed(0, &[1, 2, 3]);
        let b = derive_seed(0, &[1, 2, 4]);
        let c = derive_seed(1, &[1, 2, 3]);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_seed(0, &[1, 2, 3]));
    }

    #[test]
    fn sample_is_distinct_and_in_range() {
        let mut rng = task_rng(7, &[0]);
        let picks = sample_without_replacement(&mut rng, 100, 40);
        assert_eq!(picks.len(), 40);
        let set: HashSet<_> = picks.iter().collect();
        assert_eq!(set.len(), 40);
        assert!(picks.iter().all(|&i| i < 100));
    }

    #[test]
    fn sample_all_is_a_permutation() {
        let mut rng = task_rng(3, &[1]);
        let mut picks = sample_without_replacement(&mut rng, 10, 10);
        picks.sort_unstable();
        assert_eq!(picks, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn normal_moments_are_sane() {
        let mut rng = task_rng(11, &[]);
        let n = 200_000;
        let draws: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }
}
