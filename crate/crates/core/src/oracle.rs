//! Brute-force ground truth for desk-scale instances.
//!
//! Histograms use exact integer sums as keys; nothing here hashes or samples.

use serde::Serialize;

use crate::classic::{CostCounters, SolverOutcome};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::instance::{Instance, Subset};
use crate::limits;
use crate::sumset::{self, SumSet};
use crate::with_words;
use crate::word::SumWord;

/// `b_S`: for each achievable sum over the coordinates `S`, how many subsets
/// of `S` reach it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumHistogram {
    /// Sorted by sum; every count is positive.
    entries: Vec<(u128, u64)>,
    subset: Subset,
}

impl SumHistogram {
    pub fn entries(&self) -> &[(u128, u64)] {
        &self.entries
    }

    pub fn subset(&self) -> Subset {
        self.subset
    }

    pub fn count(&self, sum: u128) -> u64 {
        self.entries
            .binary_search_by(|e| e.0.cmp(&sum))
            .map_or(0, |k| self.entries[k].1)
    }

    /// `|w(2^S)|`, the support size.
    pub fn support(&self) -> usize {
        self.entries.len()
    }

    /// `Σ_x b_S(x)`, always `2^|S|`.
    pub fn mass(&self) -> u128 {
        self.entries.iter().map(|e| e.1 as u128).sum()
    }

    /// Largest bin and the smallest sum attaining it.
    pub fn mode(&self) -> (u128, u64) {
        self.entries
            .iter()
            .copied()
            .fold((0, 0), |best, e| if e.1 > best.1 { e } else { best })
    }

    pub fn max_count(&self) -> u64 {
        self.mode().1
    }

    /// `‖b_S‖₂² = Σ_x b_S(x)²`.
    pub fn l2_squared(&self) -> u128 {
        self.entries.iter().map(|e| (e.1 as u128).pow(2)).sum()
    }
}

fn check_subset(instance: &Instance, s: Subset) -> Result<Vec<usize>> {
    limits::check_items(instance.n())?;
    if !s.fits(instance.n()) {
        return Err(Error::Domain(format!(
            "subset {s} reaches past n = {}",
            instance.n()
        )));
    }
    Ok(s.indices().collect())
}

/// Exact `b_S` over all `2^|S|` subsets of `S`.
pub fn enumerate_histogram(instance: &Instance, s: Subset) -> Result<SumHistogram> {
    let items = check_subset(instance, s)?;
    limits::check_enumeration(items.len())?;
    let (weights, _) = instance.narrow_words()?;
    Ok(SumHistogram {
        entries: sumset::histogram(&weights, &items)?,
        subset: s,
    })
}

/// `β(w)`: the largest number of subsets of `[n]` sharing a sum.
pub fn max_bin(instance: &Instance) -> Result<u64> {
    Ok(enumerate_histogram(instance, Subset::full(instance.n()))?.max_count())
}

/// `|w(2^S)|`, by the deduplicating DP (cost scales with the answer).
pub fn distinct_sums(instance: &Instance, s: Subset) -> Result<usize> {
    let items = check_subset(instance, s)?;
    with_words!(instance, |w, _t| Ok(SumSet::build(w, &items)?.len()))
}

/// Reference solver: scans all `2^n` subsets in Gray-code order and returns the
/// numerically smallest witness mask.
pub fn brute_solve(instance: &Instance) -> Result<SolverOutcome> {
    brute_solve_with(instance, Exec::default())
}

/// [`brute_solve`] under an explicit execution policy. The high item bits are
/// split into independent blocks, so both policies return the same witness.
pub fn brute_solve_with(instance: &Instance, exec: Exec) -> Result<SolverOutcome> {
    limits::check_items(instance.n())?;
    limits::check_enumeration(instance.n())?;
    let n = instance.n();
    let (witness, scanned) = with_words!(instance, |w, t| brute_scan(w, t, n, exec));
    let cost = CostCounters {
        sums_enumerated: scanned,
        ..CostCounters::default()
    };
    Ok(SolverOutcome::from_candidate(instance, witness.map(Subset), cost))
}

fn brute_scan<W: SumWord>(weights: &[W], target: &W, n: usize, exec: Exec) -> (Option<u64>, u64) {
    // Up to 2^6 blocks keyed by the top bits; each block Gray-scans the rest.
    let high = n.min(6);
    let low_items: Vec<usize> = (0..n - high).collect();
    let results = exec.map_range(0..1u64 << high, |prefix| {
        let base_mask = prefix << (n - high);
        let base: W = (0..high)
            .filter(|b| prefix >> b & 1 == 1)
            .fold(W::zero(), |acc, b| acc.add(&weights[n - high + b]));
        let Some(need) = target.checked_sub(&base) else {
            return (None, 0);
        };
        let mut best: Option<u64> = None;
        let mut count = 0u64;
        sumset::for_each_subset(weights, &low_items, |m, s| {
            count += 1;
            // Gray order is not numeric order; keep the smallest.
            if *s == need && best.is_none_or(|b| m < b) {
                best = Some(m);
            }
        });
        let best = best.map(|m| base_mask | m);
        (best, count)
    });
    let scanned = results.iter().map(|r| r.1).sum();
    // Blocks are ordered by prefix, so the first hit holds the smallest mask.
    (results.into_iter().find_map(|r| r.0), scanned)
}
