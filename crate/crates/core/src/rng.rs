use num_bigint::{BigUint, RandBigInt};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded, platform-independent random stream. Single owner; use [`split`]
/// to hand independent streams to other threads.
///
/// [`split`]: RandomSource::split
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    stream: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            seed,
            stream: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A fresh stream seeded from this one.
    pub fn split(&mut self) -> RandomSource {
        RandomSource::new(self.stream.next_u64())
    }

    /// `count` independent streams, in order.
    pub fn split_n(&mut self, count: usize) -> Vec<RandomSource> {
        (0..count).map(|_| self.split()).collect()
    }

    /// Uniform in `[0, bound)`.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.stream.gen_range(0..bound)
    }

    pub fn below_u128(&mut self, bound: u128) -> u128 {
        self.stream.gen_range(0..bound)
    }

    /// Uniform in `[lo, hi]`.
    pub fn range_inclusive_big(&mut self, lo: &BigUint, hi: &BigUint) -> BigUint {
        self.stream.gen_biguint_range(lo, &(hi + 1u8))
    }

    /// Uniform in `[0, bound)`.
    pub fn below_big(&mut self, bound: &BigUint) -> BigUint {
        self.stream.gen_biguint_below(bound)
    }

    pub fn unit(&mut self) -> f64 {
        self.stream.gen::<f64>()
    }

    pub fn coin(&mut self) -> bool {
        self.stream.gen::<bool>()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.stream.next_u64()
    }
}
