//! Portable seeded sampling.
//!
//! The generator is ChaCha8 keyed with the 64-bit seed in little-endian order
//! in the first 8 key bytes (remaining 24 bytes zero) and the stream id set to
//! the curve-point index. Bounded integers use Lemire's multiply-and-reject
//! method on 64-bit outputs. Each step is fixed here, so a given
//! `(seed, stream)` reproduces the same indices on every platform.

use rand_chacha::ChaCha8Rng;
use rand_core::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

/// Name recorded in curve metadata.
pub const GENERATOR_NAME: &str = "chacha8-le64-lemire";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    #[default]
    WithoutReplacement,
    WithReplacement,
}

#[derive(Debug, Clone)]
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream);
        SeededRng(rng)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `0..bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let mut m = self.next_u64() as u128 * bound as u128;
        if (m as u64) < bound {
            let threshold = bound.wrapping_neg() % bound;
            while (m as u64) < threshold {
                m = self.next_u64() as u128 * bound as u128;
            }
        }
        (m >> 64) as u64
    }
}

/// `count` indices drawn from `0..population`.
///
/// Without replacement this is a partial Fisher–Yates shuffle, so the result
/// has no duplicates and is returned in draw order.
pub fn sample_indices(population: usize, count: usize, rng: &mut SeededRng, sampling: Sampling) -> Vec<usize> {
    match sampling {
        Sampling::WithReplacement => (0..count).map(|_| rng.below(population as u64) as usize).collect(),
        Sampling::WithoutReplacement => {
            assert!(count <= population, "cannot draw {count} of {population} without replacement");
            let mut idx: Vec<usize> = (0..population).collect();
            for i in 0..count {
                let j = i + rng.below((population - i) as u64) as usize;
                idx.swap(i, j);
            }
            idx.truncate(count);
            idx
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_and_seeds_differ() {
        let a: Vec<u64> = (0..4)
            .map({
                let mut r = SeededRng::new(7, 0);
                move |_| r.next_u64()
            })
            .collect();
        let b: Vec<u64> = (0..4)
            .map({
                let mut r = SeededRng::new(7, 1);
                move |_| r.next_u64()
            })
            .collect();
        let c: Vec<u64> = (0..4)
            .map({
                let mut r = SeededRng::new(8, 0);
                move |_| r.next_u64()
            })
            .collect();
        let a2: Vec<u64> = (0..4)
            .map({
                let mut r = SeededRng::new(7, 0);
                move |_| r.next_u64()
            })
            .collect();
        assert_eq!(a, a2);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn below_stays_in_range_and_covers_it() {
        let mut r = SeededRng::new(1, 0);
        let mut seen = [false; 7];
        for _ in 0..1000 {
            let v = r.below(7);
            assert!(v < 7);
            seen[v as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn without_replacement_is_distinct() {
        let mut r = SeededRng::new(3, 2);
        let mut s = sample_indices(100, 60, &mut r, Sampling::WithoutReplacement);
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), 60);
        assert!(s.iter().all(|&i| i < 100));
        let mut r = SeededRng::new(3, 2);
        let mut all = sample_indices(10, 10, &mut r, Sampling::WithoutReplacement);
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn with_replacement_draws_count() {
        let mut r = SeededRng::new(3, 2);
        let s = sample_indices(5, 50, &mut r, Sampling::WithReplacement);
        assert_eq!(s.len(), 50);
        assert!(s.iter().all(|&i| i < 5));
    }

    #[test]
    fn uniformity_chi_square() {
        // 6000 draws over 6 cells; chi-square with 5 dof has a 0.1% tail at 20.5.
        let mut r = SeededRng::new(99, 0);
        let mut counts = [0u32; 6];
        for _ in 0..6000 {
            counts[r.below(6) as usize] += 1;
        }
        let chi: f64 = counts.iter().map(|&c| (c as f64 - 1000.0).powi(2) / 1000.0).sum();
        assert!(chi < 20.5, "{chi} {counts:?}");
    }
}
