//! Synthetic workloads shared by the benchmarks.

use pinlab_core::{Corpus, Pin};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` PINs with a human-like skew: popular codes, years, dates and noise.
pub fn synthetic_corpus(n: usize, seed: u64) -> Corpus {
    const POPULAR: [usize; 8] = [1234, 1111, 0, 1212, 7777, 2580, 4321, 6969];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let idx = match rng.gen_range(0..10) {
                0..=2 => POPULAR[rng.gen_range(0..POPULAR.len())],
                3 | 4 => 1950 + rng.gen_range(0..60),
                5 => rng.gen_range(1..13) * 100 + rng.gen_range(1..32),
                _ => rng.gen_range(0..10_000),
            };
            Pin::from_index(idx)
        })
        .collect()
}
