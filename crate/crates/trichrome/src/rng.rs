//! Small deterministic PRNG used by the generators and randomized solvers.
//!
//! Reproducibility is a contract here: the same seed must produce the same
//! byte stream on every platform and every run, so we keep the generator
//! in-tree instead of depending on an external crate whose output could
//! change between versions.

/// SplitMix64 step. Good enough statistical quality for instance
/// generation and trial subsampling; not cryptographic.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    /// Independent stream for (seed, index). Trial `i` sees the same values
    /// whether trials run sequentially or in parallel.
    pub fn stream(seed: u64, index: u64) -> Self {
        let mut s = seed;
        let a = splitmix64(&mut s);
        let mut t = a ^ index.wrapping_mul(0xd6e8_feb8_6659_fd93);
        let b = splitmix64(&mut t);
        Rng { state: b }
    }

    pub fn next_u64(&mut self) -> u64 {
        splitmix64(&mut self.state)
    }

    /// Uniform value in `0..bound`. `bound` must be nonzero.
    pub fn below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        // Rejection sampling to stay unbiased.
        let bound = bound as u64;
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return (v % bound) as usize;
            }
        }
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.f64() < p
    }

    /// Uniform in [0, 1).
    pub fn f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }

    /// Sorted random `k`-subset of `0..n` (k <= n).
    pub fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        debug_assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        self.shuffle(&mut pool);
        let mut take: Vec<usize> = pool.into_iter().take(k).collect();
        take.sort_unstable();
        take
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<u64> = (0..8).map(|i| Rng::stream(42, i).next_u64()).collect();
        let b: Vec<u64> = (0..8).map(|i| Rng::stream(42, i).next_u64()).collect();
        assert_eq!(a, b);
        let c: Vec<u64> = (0..8).map(|i| Rng::stream(43, i).next_u64()).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn below_is_in_range() {
        let mut rng = Rng::new(7);
        for _ in 0..1000 {
            assert!(rng.below(13) < 13);
        }
    }

    #[test]
    fn subset_is_sorted_and_distinct() {
        let mut rng = Rng::new(9);
        for _ in 0..100 {
            let s = rng.subset(10, 4);
            assert_eq!(s.len(), 4);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|&x| x < 10));
        }
    }
}
