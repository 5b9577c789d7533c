use crate::classic::{CostCounters, SolverOutcome};
use crate::error::{Error, Result};
use crate::instance::{Instance, Subset};
use crate::sumset::{join_min_mask, SumSet};
use crate::with_words;
use crate::word::SumWord;

use super::params::check_shape;

/// `|L| = ⌈(1 - μ(1-γ))/2 · n⌉`, clamped to `n - |M|`.
pub fn few_sums_left_size(n: usize, m_size: usize, gamma: f64) -> usize {
    let mu = m_size as f64 / n as f64;
    let l = ((1.0 - mu * (1.0 - gamma)) / 2.0 * n as f64 - 1e-9).ceil().max(0.0) as usize;
    l.min(n - m_size)
}

fn few_core<W: SumWord>(w: &[W], t: &W, left: &[usize], right: &[usize]) -> Result<(Option<u64>, CostCounters)> {
    let l = SumSet::build(w, left)?;
    let r = SumSet::build(w, right)?;
    let (best, probes) = join_min_mask(&l, &r, t);
    let cost = CostCounters {
        sums_enumerated: l.work + r.work,
        dict_lookups: probes,
        peak_retained: (l.len() + r.len()) as u64,
        steps: l.work + r.work + probes,
        ..CostCounters::default()
    };
    Ok((best, cost))
}

/// Exact join solver for a coordinate set `M` with `|w(2^M)| <= 2^{γ|M|}`.
/// `L` is the first `⌈(1-μ(1-γ))n/2⌉` items outside `M` and `R = [n] ∖ L`; both
/// sum sets are built by the deduplicating DP, so `R`'s cost follows its
/// distinct sums rather than `2^|R|`.
pub fn solve_few_sums(instance: &Instance, m: Subset, gamma: f64) -> Result<SolverOutcome> {
    let n = instance.n();
    let k = check_shape(n, m, gamma)?;
    let distinct = crate::oracle::distinct_sums(instance, m)?;
    if (distinct as f64).log2() > gamma * k as f64 + 1e-9 {
        return Err(Error::Contract(format!(
            "M generates {distinct} sums, more than 2^({gamma}·{k})"
        )));
    }
    let l_size = few_sums_left_size(n, k, gamma);
    let left: Vec<usize> = (0..n).filter(|i| !m.contains(*i)).take(l_size).collect();
    let left_mask = Subset::from_indices(left.iter().copied());
    let right: Vec<usize> = (0..n).filter(|i| !left_mask.contains(*i)).collect();
    let (witness, cost) = with_words!(instance, |w, t| few_core(w, t, &left, &right))?;
    Ok(SolverOutcome::from_candidate(instance, witness.map(Subset), cost).with_branch("few-sums"))
}
