//! Exact checkers for the additive-combinatorics side: uniquely decodable code
//! pairs, bin `ℓ²` norms, and ternary zero-sum counts.

use num_bigint::BigUint;
use serde::Serialize;

use crate::dispatch::{at_least_pow2, at_most_pow2, MANY_SUMS_EXPONENT, SUMS_VS_BIN_EXPONENT};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::instance::{Instance, Subset};
use crate::limits;
use crate::oracle;
use crate::sumset::{combinations, sorted_subset_sums, SumSet};

/// Largest `|A|·|B|` that [`check_udcp`] will materialize.
pub const UDCP_CAPACITY: u128 = 1 << 26;
/// Widest instance for ternary enumeration.
pub const TERNARY_LIMIT: usize = 16;
/// Widest instance for the all-equipartitions Cauchy–Schwarz sweep.
pub const EQUIPARTITION_LIMIT: usize = 10;

/// Two sets of length-`n` binary vectors, stored as masks (bit `i` is coordinate `i`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UdcpPair {
    pub n: usize,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

impl UdcpPair {
    /// Sorts and deduplicates both sides.
    pub fn new(n: usize, mut a: Vec<u64>, mut b: Vec<u64>) -> Result<Self> {
        limits::check_items(n)?;
        let full = Subset::full(n).mask();
        if a.iter().chain(&b).any(|&x| x & !full != 0) {
            return Err(Error::Domain(format!("vector longer than n = {n}")));
        }
        a.sort_unstable();
        a.dedup();
        b.sort_unstable();
        b.dedup();
        Ok(UdcpPair { n, a, b })
    }
}

/// Spreads bit `i` of `x` to bit `2i`, so that two spread vectors add
/// coordinatewise without carries.
fn spread(x: u64) -> u128 {
    let mut v = x as u128;
    v = (v | v << 32) & 0x0000_0000_FFFF_FFFF_0000_0000_FFFF_FFFF;
    v = (v | v << 16) & 0x0000_FFFF_0000_FFFF_0000_FFFF_0000_FFFF;
    v = (v | v << 8) & 0x00FF_00FF_00FF_00FF_00FF_00FF_00FF_00FF;
    v = (v | v << 4) & 0x0F0F_0F0F_0F0F_0F0F_0F0F_0F0F_0F0F_0F0F;
    v = (v | v << 2) & 0x3333_3333_3333_3333_3333_3333_3333_3333;
    v = (v | v << 1) & 0x5555_5555_5555_5555_5555_5555_5555_5555;
    v
}

/// `|A + B| = |A|·|B|`, decided exactly on the packed `{0,1,2}^n` sums.
pub fn check_udcp(pair: &UdcpPair) -> Result<bool> {
    check_udcp_with(pair, Exec::default())
}

pub fn check_udcp_with(pair: &UdcpPair, exec: Exec) -> Result<bool> {
    let size = pair.a.len() as u128 * pair.b.len() as u128;
    if size > UDCP_CAPACITY {
        return Err(Error::capacity("UDCP sumset", size, UDCP_CAPACITY));
    }
    limits::check_table("UDCP sumset", size, 16)?;
    let bs: Vec<u128> = pair.b.iter().map(|&y| spread(y)).collect();
    let mut sums: Vec<u128> = exec
        .map(&pair.a, |&x| {
            let sx = spread(x);
            bs.iter().map(|sy| sx + sy).collect::<Vec<_>>()
        })
        .concat();
    exec.sort_unstable(&mut sums);
    sums.dedup();
    Ok(sums.len() as u128 == size)
}

/// `A` holds the smallest mask of every distinct sum and `B` every mask of the
/// largest bin (the one with the smallest sum on ties), so `|A| = |w(2^[n])|`
/// and `|B| = β(w)`.
pub fn udcp_from_instance(instance: &Instance, oracle_limit: usize) -> Result<UdcpPair> {
    let n = instance.n();
    if n > oracle_limit {
        return Err(Error::capacity("oracle width", n as u128, oracle_limit as u128));
    }
    limits::check_enumeration(n)?;
    let (w, _) = instance.narrow_words()?;
    let items: Vec<usize> = (0..n).collect();
    let a: Vec<u64> = SumSet::build(&w, &items)?.entries().iter().map(|e| e.1).collect();
    let (mode, _) = oracle::enumerate_histogram(instance, Subset::full(n))?.mode();
    let b: Vec<u64> = sorted_subset_sums(&w, &items)?
        .into_iter()
        .filter(|e| e.0 == mode)
        .map(|e| e.1)
        .collect();
    UdcpPair::new(n, a, b)
}

/// `‖b_S‖₂² = Σ_x b_S(x)²`.
pub fn bin_l2(instance: &Instance, s: Subset) -> Result<u128> {
    Ok(oracle::enumerate_histogram(instance, s)?.l2_squared())
}

fn signed_weights(instance: &Instance) -> Result<Vec<i128>> {
    let n = instance.n();
    if n > TERNARY_LIMIT {
        return Err(Error::capacity("ternary enumeration width", n as u128, TERNARY_LIMIT as u128));
    }
    if instance.total() >= BigUint::from(1u128 << 126) {
        return Err(Error::capacity("signed sums wider than 126 bits", instance.total().bits() as u128, 126));
    }
    let (w, _) = instance.narrow_words()?;
    Ok(w.into_iter().map(|x| x as i128).collect())
}

fn ternary_dfs(w: &[i128], i: usize, sum: i128, ones: usize, counts: &mut [u64]) {
    if i == w.len() {
        if sum == 0 {
            counts[ones] += 1;
        }
        return;
    }
    ternary_dfs(w, i + 1, sum, ones, counts);
    ternary_dfs(w, i + 1, sum + w[i], ones + 1, counts);
    ternary_dfs(w, i + 1, sum - w[i], ones + 1, counts);
}

/// `|B_ℓ|` for every `ℓ ∈ [0, n]`, where `B_ℓ = {y ∈ {-1,0,1}^n : y·w = 0, ‖y‖₁ = ℓ}`.
pub fn count_b_sigma_all(instance: &Instance) -> Result<Vec<u64>> {
    count_b_sigma_all_with(instance, Exec::default())
}

pub fn count_b_sigma_all_with(instance: &Instance, exec: Exec) -> Result<Vec<u64>> {
    let w = signed_weights(instance)?;
    let n = w.len();
    // Shard over the ternary prefix of the first few coordinates.
    let k = n.min(6);
    let shards = 3u64.pow(k as u32);
    let partial = exec.map_range(0..shards, |code| {
        let (mut c, mut sum, mut ones) = (code, 0i128, 0usize);
        for &wi in &w[..k] {
            match c % 3 {
                1 => {
                    sum += wi;
                    ones += 1;
                }
                2 => {
                    sum -= wi;
                    ones += 1;
                }
                _ => {}
            }
            c /= 3;
        }
        let mut counts = vec![0u64; n + 1];
        ternary_dfs(&w, k, sum, ones, &mut counts);
        counts
    });
    let mut total = vec![0u64; n + 1];
    for counts in partial {
        for (t, c) in total.iter_mut().zip(counts) {
            *t += c;
        }
    }
    Ok(total)
}

/// `|B_ℓ|` for one `ℓ`; zero when `ℓ > n`.
pub fn count_b_sigma(instance: &Instance, ell1: usize) -> Result<u64> {
    Ok(count_b_sigma_all(instance)?.get(ell1).copied().unwrap_or(0))
}

/// Both sides of `‖b‖₂² = Σ_ℓ |B_ℓ|·2^{n-ℓ}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct L2Identity {
    pub l2_squared: u128,
    pub decomposition: u128,
    pub counts: Vec<u64>,
}

impl L2Identity {
    pub fn holds(&self) -> bool {
        self.l2_squared == self.decomposition
    }
}

pub fn l2_identity(instance: &Instance) -> Result<L2Identity> {
    let n = instance.n();
    let counts = count_b_sigma_all(instance)?;
    let decomposition = counts
        .iter()
        .enumerate()
        .map(|(l, &c)| c as u128 * (1u128 << (n - l)))
        .sum();
    Ok(L2Identity {
        l2_squared: bin_l2(instance, Subset::full(n))?,
        decomposition,
        counts,
    })
}

/// `β([n])² <= ‖b_S‖₂²·‖b_T‖₂²` for one partition `S, T = [n] ∖ S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CauchySchwarz {
    pub s: Subset,
    pub beta: u64,
    pub l2_s: u128,
    pub l2_t: u128,
}

impl CauchySchwarz {
    pub fn holds(&self) -> bool {
        BigUint::from(self.beta).pow(2) <= BigUint::from(self.l2_s) * BigUint::from(self.l2_t)
    }
}

pub fn cauchy_schwarz(instance: &Instance, s: Subset) -> Result<CauchySchwarz> {
    let n = instance.n();
    let t = Subset::full(n).difference(s);
    Ok(CauchySchwarz {
        s,
        beta: oracle::max_bin(instance)?,
        l2_s: bin_l2(instance, s)?,
        l2_t: bin_l2(instance, t)?,
    })
}

/// Checks every partition with `|S| = ⌊n/2⌋`; returns how many were checked
/// and the first violation, if any.
pub fn cauchy_schwarz_all_equipartitions(instance: &Instance) -> Result<(usize, Option<CauchySchwarz>)> {
    let n = instance.n();
    if n > EQUIPARTITION_LIMIT {
        return Err(Error::capacity("equipartition sweep width", n as u128, EQUIPARTITION_LIMIT as u128));
    }
    let beta = oracle::max_bin(instance)?;
    let items: Vec<usize> = (0..n).collect();
    let sides = combinations(&items, n / 2);
    let full = Subset::full(n);
    for &mask in &sides {
        let s = Subset(mask);
        let c = CauchySchwarz {
            s,
            beta,
            l2_s: bin_l2(instance, s)?,
            l2_t: bin_l2(instance, full.difference(s))?,
        };
        if !c.holds() {
            return Ok((sides.len(), Some(c)));
        }
    }
    Ok((sides.len(), None))
}

/// Whether many sums imply a small bin, evaluated with exact exponents:
/// `(many, held)` where `held` is vacuously true when `many` is false.
pub fn sums_vs_bin(instance: &Instance) -> Result<(bool, bool)> {
    let n = instance.n();
    let distinct = BigUint::from(oracle::distinct_sums(instance, Subset::full(n))?);
    let many = at_least_pow2(&distinct, MANY_SUMS_EXPONENT, n);
    if !many {
        return Ok((false, true));
    }
    let beta = BigUint::from(oracle::max_bin(instance)?);
    Ok((true, at_most_pow2(&beta, SUMS_VS_BIN_EXPONENT, n)))
}
