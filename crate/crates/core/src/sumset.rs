//! Subset-sum enumeration primitives shared by the oracle and the solvers.
//!
//! Sorted lists are grown one item at a time by merging `list` with
//! `list + w_i`, which keeps them sorted without a final sort.

use std::cmp::Ordering;

use crate::error::Result;
use crate::limits;
use crate::word::SumWord;

/// Every subset of `items`, as `(sum, mask)` sorted by sum then mask.
/// Work and output are exactly `2^|items|`.
pub fn sorted_subset_sums<W: SumWord>(weights: &[W], items: &[usize]) -> Result<Vec<(W, u64)>> {
    limits::check_enumeration(items.len())?;
    let size = 1u128 << items.len();
    limits::check_table("sorted subset sums", size, entry_bytes::<W>())?;
    let mut list: Vec<(W, u64)> = Vec::with_capacity(size as usize);
    list.push((W::zero(), 0));
    let mut scratch = Vec::with_capacity(size as usize);
    for &i in items {
        let w = &weights[i];
        let bit = 1u64 << i;
        scratch.clear();
        merge_by(&list, w, bit, &mut scratch, |a, b| {
            a.0.cmp(&b.0).then(a.1.cmp(&b.1))
        });
        std::mem::swap(&mut list, &mut scratch);
    }
    Ok(list)
}

fn merge_by<W: SumWord, F>(list: &[(W, u64)], w: &W, bit: u64, out: &mut Vec<(W, u64)>, cmp: F)
where
    F: Fn(&(W, u64), &(W, u64)) -> Ordering,
{
    let mut i = 0;
    let mut j = 0;
    let mut shifted = list.first().map(|(s, m)| (s.add(w), m | bit));
    while i < list.len() || shifted.is_some() {
        let take_left = match (&shifted, list.get(i)) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(b), Some(a)) => cmp(a, b) != Ordering::Greater,
        };
        if take_left {
            out.push(list[i].clone());
            i += 1;
        } else {
            out.push(shifted.take().unwrap());
            j += 1;
            shifted = list.get(j).map(|(s, m)| (s.add(w), m | bit));
        }
    }
}

fn entry_bytes<W>() -> u128 {
    (std::mem::size_of::<W>() + 8) as u128
}

/// The distinct sums `w(2^S)`, each with the smallest mask achieving it.
#[derive(Clone, Debug)]
pub struct SumSet<W> {
    entries: Vec<(W, u64)>,
    /// Entries touched while building; the deduplicating DP's cost.
    pub work: u64,
}

impl<W: SumWord> SumSet<W> {
    /// Deduplicating DP over `items`; time and memory scale with `|w(2^S)|`
    /// rather than `2^|S|`.
    pub fn build(weights: &[W], items: &[usize]) -> Result<Self> {
        let mut entries: Vec<(W, u64)> = vec![(W::zero(), 0)];
        let mut scratch = Vec::new();
        let mut work = 1u64;
        for &i in items {
            limits::check_table("distinct sum set", 2 * entries.len() as u128, entry_bytes::<W>())?;
            let w = &weights[i];
            let bit = 1u64 << i;
            scratch.clear();
            scratch.reserve(2 * entries.len());
            merge_by(&entries, w, bit, &mut scratch, |a, b| {
                a.0.cmp(&b.0).then(a.1.cmp(&b.1))
            });
            work += scratch.len() as u64;
            scratch.dedup_by(|later, earlier| later.0 == earlier.0);
            std::mem::swap(&mut entries, &mut scratch);
        }
        Ok(SumSet { entries, work })
    }

    /// Collapses a sorted `(sum, mask)` list to its distinct sums.
    pub fn from_sorted(mut entries: Vec<(W, u64)>) -> Self {
        let work = entries.len() as u64;
        entries.dedup_by(|later, earlier| later.0 == earlier.0);
        SumSet { entries, work }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(W, u64)] {
        &self.entries
    }

    /// Smallest mask with sum `x`.
    pub fn lookup(&self, x: &W) -> Option<u64> {
        self.entries
            .binary_search_by(|(s, _)| s.cmp(x))
            .ok()
            .map(|k| self.entries[k].1)
    }
}

/// Finds the numerically smallest `a | b` with `a ∈ left`, `b ∈ right`,
/// `sum(a) + sum(b) = target`. Both sets must be over disjoint items.
/// Returns the witness and the number of dictionary probes.
pub fn join_min_mask<W: SumWord>(left: &SumSet<W>, right: &SumSet<W>, target: &W) -> (Option<u64>, u64) {
    let mut best: Option<u64> = None;
    let mut probes = 0u64;
    for (s, m) in right.entries() {
        let Some(need) = target.checked_sub(s) else {
            break;
        };
        probes += 1;
        if let Some(lm) = left.lookup(&need) {
            let cand = lm | m;
            best = Some(best.map_or(cand, |b: u64| b.min(cand)));
        }
    }
    (best, probes)
}

/// Calls `f(mask, sum)` for every subset of `items` in Gray-code order, with
/// one addition or subtraction per step.
pub fn for_each_subset<W: SumWord, F: FnMut(u64, &W)>(weights: &[W], items: &[usize], mut f: F) {
    let k = items.len();
    let mut mask = 0u64;
    let mut in_set = vec![false; k];
    let mut sum = W::zero();
    f(0, &sum);
    for step in 1u64..(1u64 << k) {
        let j = step.trailing_zeros() as usize;
        let i = items[j];
        if in_set[j] {
            sum = sum.checked_sub(&weights[i]).expect("gray-code sum underflow");
            mask &= !(1 << i);
        } else {
            sum = sum.add(&weights[i]);
            mask |= 1 << i;
        }
        in_set[j] = !in_set[j];
        f(mask, &sum);
    }
}

/// Every `k`-subset of `items` as a mask, in increasing mask order of the
/// positions within `items`.
pub fn combinations(items: &[usize], k: usize) -> Vec<u64> {
    let m = items.len();
    if k > m {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u64, |acc, &j| acc | 1 << items[j]));
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < m - k + p) else {
            break;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
    out
}

/// Sorted `(sum, count)` histogram of `items`, by a counting merge DP.
pub fn histogram(weights: &[u128], items: &[usize]) -> Result<Vec<(u128, u64)>> {
    limits::check_enumeration(items.len())?;
    let mut hist: Vec<(u128, u64)> = vec![(0, 1)];
    let mut scratch: Vec<(u128, u64)> = Vec::new();
    for &i in items {
        limits::check_table("sum histogram", 2 * hist.len() as u128, 24)?;
        let w = weights[i];
        scratch.clear();
        scratch.reserve(2 * hist.len());
        let (mut a, mut b) = (0usize, 0usize);
        while a < hist.len() || b < hist.len() {
            let sa = hist.get(a).map(|e| e.0);
            let sb = hist.get(b).map(|e| e.0 + w);
            let (s, c) = match (sa, sb) {
                (Some(x), Some(y)) if x == y => {
                    let c = hist[a].1 + hist[b].1;
                    a += 1;
                    b += 1;
                    (x, c)
                }
                (Some(x), Some(y)) if x < y => {
                    a += 1;
                    (x, hist[a - 1].1)
                }
                (Some(_), Some(y)) | (None, Some(y)) => {
                    b += 1;
                    (y, hist[b - 1].1)
                }
                (Some(x), None) => {
                    a += 1;
                    (x, hist[a - 1].1)
                }
                (None, None) => unreachable!(),
            };
            scratch.push((s, c));
        }
        std::mem::swap(&mut hist, &mut scratch);
    }
    Ok(hist)
}
