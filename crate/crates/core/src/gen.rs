//! Instance generators spanning the bin-size and density landscape.
//!
//! Every generator is a pure function of its parameters and the seed.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::instance::{pow2, Instance, Subset};
use crate::limits;
use crate::rng::RandomSource;

/// `floor(2^x)` for `x >= 0`, with 53 bits of precision in the mantissa.
pub fn pow2_floor(x: f64) -> BigUint {
    assert!(x >= 0.0 && x.is_finite());
    let k = x.floor();
    if k <= 52.0 {
        return BigUint::from(x.exp2().floor() as u64);
    }
    let frac = x - k;
    let mantissa = (frac.exp2() * (1u64 << 52) as f64).floor() as u64;
    BigUint::from(mantissa) << (k as u64 - 52)
}

/// Weights and target drawn uniformly from `[1, floor(2^{n/d})]`.
pub fn gen_random_density(n: usize, d: f64, rng: &mut RandomSource) -> Result<Instance> {
    if n == 0 || d.is_nan() || d <= 0.0 || !d.is_finite() {
        return Err(Error::Domain(format!(
            "density generator needs n >= 1 and d > 0 (n={n}, d={d})"
        )));
    }
    let hi = pow2_floor(n as f64 / d);
    let one = BigUint::one();
    let weights = (0..n).map(|_| rng.range_inclusive_big(&one, &hi)).collect();
    let target = rng.range_inclusive_big(&one, &hi);
    Instance::new(weights, target)
}

/// `1,1,3,3,9,9,…,3^{n/2-1},3^{n/2-1}` with the target hitting one copy of each power.
pub fn gen_geometric_pairs(n: usize) -> Result<Instance> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::Domain(format!(
            "geometric pairs need an even n >= 2, got {n}"
        )));
    }
    let mut weights = Vec::with_capacity(n);
    let mut target = BigUint::from(0u8);
    let mut power = BigUint::one();
    for _ in 0..n / 2 {
        weights.push(power.clone());
        weights.push(power.clone());
        target += &power;
        power *= 3u8;
    }
    Instance::new(weights, target)
}

/// Weights uniform in `[1, 2^bits]`, a uniform hidden subset `X`, and `t = w(X)`.
pub fn gen_planted(n: usize, bits: u32, rng: &mut RandomSource) -> Result<(Instance, Subset)> {
    if n == 0 || bits == 0 {
        return Err(Error::Domain(format!(
            "planted generator needs n >= 1 and bits >= 1 (n={n}, bits={bits})"
        )));
    }
    limits::check_items(n)?;
    let hi = pow2(bits as u64);
    let one = BigUint::one();
    let weights: Vec<BigUint> = (0..n).map(|_| rng.range_inclusive_big(&one, &hi)).collect();
    let hidden = Subset::from_indices((0..n).filter(|_| rng.coin()));
    let target = hidden.indices().map(|i| &weights[i]).sum();
    Ok((Instance::new(weights, target)?, hidden))
}

/// `n` copies of `value`.
pub fn gen_all_equal(n: usize, value: u64, target: u64) -> Result<Instance> {
    Instance::from_u64(&vec![value; n], target)
}

/// Weights `2^1, 2^2, …, 2^n`: every subset has a distinct sum.
pub fn gen_super_increasing(n: usize, target: BigUint) -> Result<Instance> {
    Instance::new((1..=n as u64).map(pow2).collect(), target)
}
