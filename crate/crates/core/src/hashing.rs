//! Bit-length reduction: hash an instance modulo a random prime, lifting the
//! target by a random multiple of the prime so that solutions survive.
//!
//! With `p` uniform among primes in `[B·log2 t, 2B·log2 t]` and a shift `r`
//! uniform in `{0,…,n-1}`, the reduced instance is `w'_i = w_i mod p`,
//! `t' = (t mod p) + r·p`. Every reduced number is below `4nB·log2 B`; the
//! solution set, the number of distinct sums, and the largest bin are
//! preserved with the probabilities checked by [`check_reduction_properties`].

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::limits;
use crate::numeric::random_prime;
use crate::oracle;
use crate::rng::RandomSource;
use crate::sumset;
use crate::word::log2_big;

/// Extra applications allowed when the lifted target is still too long.
pub const MAX_REAPPLICATIONS: usize = 3;

const FIXED_POINT_BITS: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HashRound {
    #[serde(serialize_with = "ser_big")]
    pub prime: BigUint,
    pub shift: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionRecord {
    pub rounds: Vec<HashRound>,
    pub bound: BigUint,
    pub reduced: Instance,
}

impl ReductionRecord {
    /// The prime of the first application.
    pub fn prime(&self) -> &BigUint {
        &self.rounds[0].prime
    }

    pub fn shift(&self) -> u64 {
        self.rounds[0].shift
    }
}

fn ser_big<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `⌈x · y⌉` for a big `x` and a non-negative real `y`, via 32-bit fixed point.
fn mul_real_ceil(x: &BigUint, y: f64) -> BigUint {
    let fp = (y * (1u64 << FIXED_POINT_BITS) as f64).ceil() as u128;
    let prod = x * BigUint::from(fp);
    let q = &prod >> FIXED_POINT_BITS;
    if (&q << FIXED_POINT_BITS) == prod {
        q
    } else {
        q + 1u8
    }
}

/// `⌊x · y⌋`, the conservative direction for upper bounds.
fn mul_real_floor(x: &BigUint, y: f64) -> BigUint {
    let fp = (y * (1u64 << FIXED_POINT_BITS) as f64).floor() as u128;
    (x * BigUint::from(fp)) >> FIXED_POINT_BITS
}

/// `4nB·log2 B`, rounded down: every reduced number must lie below it.
pub fn modulus_bound(n: usize, b: &BigUint) -> BigUint {
    mul_real_floor(&(b * (4 * n as u64)), log2_big(b))
}

fn lift_threshold(n: usize, b: &BigUint) -> BigUint {
    mul_real_floor(&(b * (2 * n as u64)), log2_big(b))
}

fn apply_round(instance: &Instance, b: &BigUint, rng: &mut RandomSource) -> Result<(HashRound, Instance)> {
    let n = instance.n();
    let lo = mul_real_ceil(b, log2_big(instance.target())).max(BigUint::from(3u8));
    let p = random_prime(&lo, rng)?;
    let shift = rng.below(n.max(1) as u64);
    let weights = instance.weights().iter().map(|w| w % &p).collect();
    let target = instance.target() % &p + &p * shift;
    Ok((
        HashRound { prime: p, shift },
        Instance::new_nonnegative(weights, target),
    ))
}

/// Hashes `instance` with bound `b`. Requires `b >= 2` and `t >= 2n`; smaller
/// targets are answered by [`UseDp`](Error::UseDp).
pub fn reduce_bitlength(instance: &Instance, b: &BigUint, rng: &mut RandomSource) -> Result<ReductionRecord> {
    let n = instance.n();
    if *b < BigUint::from(2u8) {
        return Err(Error::Domain(format!("hash bound B = {b} must be at least 2")));
    }
    if *instance.target() < BigUint::from(2 * n as u64) || instance.target().bits() < 2 {
        return Err(Error::UseDp {
            target: instance.target().to_string(),
            two_n: 2 * n,
        });
    }
    let (round, mut reduced) = apply_round(instance, b, rng)?;
    let mut rounds = vec![round];
    let threshold = lift_threshold(n, b);
    while *reduced.target() >= threshold && rounds.len() <= MAX_REAPPLICATIONS {
        let (round, next) = apply_round(&reduced, b, rng)?;
        rounds.push(round);
        reduced = next;
    }
    let bound = modulus_bound(n, b);
    let within = |x: &BigUint| *x < bound;
    if !(reduced.weights().iter().all(within) && within(reduced.target())) {
        return Err(Error::ReductionDiverged {
            rounds: rounds.len(),
        });
    }
    Ok(ReductionRecord {
        rounds,
        bound: b.clone(),
        reduced,
    })
}

/// Which of the reduction's guarantees held on one run, judged by the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    /// All reduced numbers below `4nB·log2 B`.
    pub p1: bool,
    /// `w(X) = t ⇔ w'(X) = t'` for every `X`; `None` unless `B >= 10·|w(2^[n])|`.
    pub p2: Option<bool>,
    /// `|w(2^[n])|/2 <= |w'(2^[n])| <= n·|w(2^[n])|`; same hypothesis as P2.
    pub p3: Option<bool>,
    /// `β(w)/n <= β(w') <= β(w)`; `None` unless `B >= 5·|w(2^[n])|²`.
    pub p4: Option<bool>,
    pub distinct_original: usize,
    pub distinct_reduced: usize,
    pub beta_original: u64,
    pub beta_reduced: u64,
}

fn solution_masks(instance: &Instance) -> Result<Vec<u64>> {
    let (w, t) = instance.narrow_words()?;
    let items: Vec<usize> = (0..instance.n()).collect();
    let mut out = Vec::new();
    sumset::for_each_subset(&w, &items, |m, s| {
        if *s == t {
            out.push(m);
        }
    });
    out.sort_unstable();
    Ok(out)
}

/// Evaluates properties 1–4 of a reduction by exhaustive enumeration.
pub fn check_reduction_properties(
    original: &Instance,
    record: &ReductionRecord,
    oracle_limit: usize,
) -> Result<ReductionReport> {
    let n = original.n();
    if n > oracle_limit {
        return Err(Error::capacity("oracle width", n as u128, oracle_limit as u128));
    }
    limits::check_enumeration(n)?;
    let reduced = &record.reduced;
    let full = crate::Subset::full(n);
    let distinct_original = oracle::distinct_sums(original, full)?;
    let distinct_reduced = oracle::distinct_sums(reduced, full)?;
    let beta_original = oracle::max_bin(original)?;
    let beta_reduced = oracle::max_bin(reduced)?;

    let bound = modulus_bound(n, &record.bound);
    let p1 = reduced.weights().iter().all(|w| *w < bound) && *reduced.target() < bound;

    let a = BigUint::from(distinct_original);
    let b = &record.bound;
    let (p2, p3) = if *b >= &a * 10u8 {
        let p2 = solution_masks(original)? == solution_masks(reduced)?;
        let p3 = 2 * distinct_reduced >= distinct_original && distinct_reduced <= n * distinct_original;
        (Some(p2), Some(p3))
    } else {
        (None, None)
    };
    let p4 = (*b >= &a * &a * 5u8).then(|| {
        (n.max(1) as u64) * beta_reduced >= beta_original && beta_reduced <= beta_original
    });
    Ok(ReductionReport {
        p1,
        p2,
        p3,
        p4,
        distinct_original,
        distinct_reduced,
        beta_original,
        beta_reduced,
    })
}

/// The largest number of distinct reduced sums that one original bin maps to.
/// For a single application this is at most `n`.
pub fn max_bin_split(original: &Instance, reduced: &Instance) -> Result<usize> {
    let n = original.n();
    limits::check_enumeration(n)?;
    let (wo, _) = original.narrow_words()?;
    let (wr, _) = reduced.narrow_words()?;
    let items: Vec<usize> = (0..n).collect();
    let mut reduced_by_mask = vec![0u128; 1 << n];
    sumset::for_each_subset(&wr, &items, |m, s| reduced_by_mask[m as usize] = *s);
    let by_sum = sumset::sorted_subset_sums(&wo, &items)?;
    let mut worst = 0;
    let mut k = 0;
    while k < by_sum.len() {
        let mut end = k;
        while end < by_sum.len() && by_sum[end].0 == by_sum[k].0 {
            end += 1;
        }
        let mut images: Vec<u128> = by_sum[k..end]
            .iter()
            .map(|e| reduced_by_mask[e.1 as usize])
            .collect();
        images.sort_unstable();
        images.dedup();
        worst = worst.max(images.len());
        k = end;
    }
    Ok(worst)
}

/// Whether every weight and the target already sit below the Property-1 bound.
pub fn already_short(instance: &Instance, b: &BigUint) -> bool {
    let bound = modulus_bound(instance.n(), b);
    instance.weights().iter().all(|w| *w < bound) && *instance.target() < bound
}

/// Bits in the largest reduced number, a handy scale summary.
pub fn reduced_bits(record: &ReductionRecord) -> u64 {
    let r = &record.reduced;
    r.weights()
        .iter()
        .chain(std::iter::once(r.target()))
        .map(|x| x.bits())
        .max()
        .unwrap_or(0)
}
