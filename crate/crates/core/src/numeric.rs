//! Entropy, multinomial estimates, primality, and random primes.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Tolerance on probability vectors passed to [`entropy`].
pub const ENTROPY_TOLERANCE: f64 = 1e-12;

/// `h(x_1,…,x_l) = Σ −x_i log2 x_i` with `0 log 0 = 0`.
pub fn entropy(xs: &[f64]) -> Result<f64> {
    if xs.iter().any(|&x| !(-ENTROPY_TOLERANCE..=1.0 + ENTROPY_TOLERANCE).contains(&x)) {
        return Err(Error::Domain(format!("probability component out of [0,1]: {xs:?}")));
    }
    let total: f64 = xs.iter().sum();
    if (total - 1.0).abs() > ENTROPY_TOLERANCE {
        return Err(Error::Domain(format!("probabilities sum to {total}, not 1")));
    }
    Ok(xs.iter().map(|&x| plogp(x)).sum())
}

#[inline]
fn plogp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy `h(x) = h(x, 1-x)`. Arguments are clamped to `[0, 1]`.
pub fn h(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    plogp(x) + plogp(1.0 - x)
}

/// Checks `h(1/2 - α) <= 1 - 2α²/ln 2` for `α ∈ [0, 1/2]`.
pub fn entropy_around_half_bound(alpha: f64) -> Result<bool> {
    if !(0.0..=0.5).contains(&alpha) {
        return Err(Error::Domain(format!("alpha {alpha} outside [0, 1/2]")));
    }
    let lhs = h(0.5 - alpha);
    let rhs = 1.0 - 2.0 * alpha * alpha / std::f64::consts::LN_2;
    Ok(lhs <= rhs + ENTROPY_TOLERANCE)
}

/// Entropy of the symbol frequencies of `x + y` when `y` has `τσn` ones and
/// `(1-τ)σn` minus-ones and `x` is balanced against each symbol class of `y`.
pub fn balanced_sum_entropy(sigma: f64, tau: f64) -> f64 {
    let a = tau * sigma / 2.0;
    let b = tau * sigma / 2.0 + (1.0 - sigma) / 2.0;
    let c = (1.0 - sigma) / 2.0 + (1.0 - tau) * sigma / 2.0;
    let d = (1.0 - tau) * sigma / 2.0;
    plogp(a) + plogp(b) + plogp(c) + plogp(d)
}

/// `log2(n!)`.
pub fn log2_factorial(n: u64) -> f64 {
    const TABLE_LEN: usize = 1024;
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE_LEN);
        let mut acc = 0.0f64;
        t.push(0.0);
        for k in 1..TABLE_LEN {
            acc += (k as f64).log2();
            t.push(acc);
        }
        t
    });
    if (n as usize) < TABLE_LEN {
        return table[n as usize];
    }
    // Stirling series; the truncation error is far below 1e-12 for n >= 1024.
    let x = n as f64;
    let ln = x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
        + 1.0 / (1260.0 * x.powi(5));
    ln / std::f64::consts::LN_2
}

/// `log2` of the multinomial coefficient `(Σ parts)! / Π parts_i!`.
pub fn multinomial_log2(parts: &[u64]) -> Result<f64> {
    if parts.is_empty() {
        return Err(Error::Domain("multinomial needs at least one part".into()));
    }
    let total: u64 = parts.iter().sum();
    Ok(log2_factorial(total) - parts.iter().map(|&p| log2_factorial(p)).sum::<f64>())
}

/// Exact binomial coefficient; saturates at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        let num = (n - i) as u128;
        let g = num_integer::gcd(acc, (i + 1) as u128);
        let (a, d) = (acc / g, (i + 1) as u128 / g);
        let num = num / d;
        acc = match a.checked_mul(num) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Bases for the probabilistic test above 2^64. 40 independent rounds bound
/// the error by `4^-40 = 2^-80`.
const BIG_ROUNDS: usize = 40;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit inputs (the first twelve primes as
/// bases suffice below 3.3·10^24).
pub fn is_prime_u64(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if m == p {
            return true;
        }
        if m.is_multiple_of(p) {
            return false;
        }
    }
    let d = (m - 1) >> (m - 1).trailing_zeros();
    let s = (m - 1).trailing_zeros();
    'bases: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, m);
        if x == 1 || x == m - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, m);
            if x == m - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn is_prime_big(m: &BigUint) -> bool {
    if let Some(small) = m.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &SMALL_PRIMES {
        if (m % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let m_minus_1 = m - &one;
    let s = m_minus_1.trailing_zeros().unwrap();
    let d = &m_minus_1 >> s;
    let two = BigUint::from(2u8);
    // Bases come from a fixed stream so the answer is a pure function of m.
    let mut bases = RandomSource::new(0x005e_ed0f_b165);
    'rounds: for _ in 0..BIG_ROUNDS {
        let a = bases.range_inclusive_big(&two, &(&m_minus_1 - &one));
        let mut x = a.modpow(&d, m);
        if x == one || x == m_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, m);
            if x == m_minus_1 {
                continue 'rounds;
            }
        }
        return false;
    }
    true
}

/// Primality of `m >= 2`: exact below 2^64, error below 2^-80 above.
pub fn is_prime(m: &BigUint) -> Result<bool> {
    if *m < BigUint::from(2u8) {
        return Err(Error::Domain(format!("primality undefined for {m}")));
    }
    Ok(is_prime_big(m))
}

/// A uniformly random prime in `[r, 2r]`, by rejection over uniform integers.
pub fn random_prime(r: &BigUint, rng: &mut RandomSource) -> Result<BigUint> {
    if *r < BigUint::from(3u8) {
        return Err(Error::Domain(format!("random_prime needs r >= 3, got {r}")));
    }
    let hi = r << 1u8;
    loop {
        let mut x = rng.range_inclusive_big(r, &hi);
        // Even candidates other than 2 are never prime; skip the test for them.
        if x.is_even() {
            if x == BigUint::from(2u8) {
                return Ok(x);
            }
            continue;
        }
        if is_prime_big(&x) {
            return Ok(std::mem::take(&mut x));
        }
    }
}

/// [`random_prime`] for moduli that fit a machine word.
pub fn random_prime_u64(r: u64, rng: &mut RandomSource) -> Result<u64> {
    if r >= 1 << 62 {
        return Err(Error::Domain(format!("word-sized prime requested for r = {r}")));
    }
    Ok(random_prime(&BigUint::from(r), rng)?.to_u64().unwrap())
}
