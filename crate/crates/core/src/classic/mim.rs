use crate::classic::{CostCounters, SolverOutcome};
use crate::error::Result;
use crate::exec::Exec;
use crate::instance::{Instance, Subset};
use crate::limits;
use crate::sumset::{join_min_mask, sorted_subset_sums, SumSet};
use crate::with_words;
use crate::word::SumWord;

/// Horowitz–Sahni: enumerate both halves' sums, then join on the target.
/// Returns the numerically smallest witness mask.
pub fn meet_in_middle(instance: &Instance) -> Result<SolverOutcome> {
    meet_in_middle_with(instance, Exec::default())
}

pub fn meet_in_middle_with(instance: &Instance, exec: Exec) -> Result<SolverOutcome> {
    limits::check_items(instance.n())?;
    let n = instance.n();
    let left: Vec<usize> = (0..n / 2).collect();
    let right: Vec<usize> = (n / 2..n).collect();
    let (witness, cost) = with_words!(instance, |w, t| mim_core(w, t, &left, &right, exec))?;
    Ok(SolverOutcome::from_candidate(instance, witness.map(Subset), cost))
}

pub(crate) fn mim_core<W: SumWord>(
    weights: &[W],
    target: &W,
    left: &[usize],
    right: &[usize],
    exec: Exec,
) -> Result<(Option<u64>, CostCounters)> {
    let (l, r) = exec.join(
        || sorted_subset_sums(weights, left),
        || sorted_subset_sums(weights, right),
    );
    let (l, r) = (l?, r?);
    let mut cost = CostCounters {
        sums_enumerated: (l.len() + r.len()) as u64,
        peak_retained: (l.len() + r.len()) as u64,
        ..CostCounters::default()
    };
    let (l, r) = (SumSet::from_sorted(l), SumSet::from_sorted(r));
    let (best, probes) = join_min_mask(&l, &r, target);
    cost.dict_lookups = probes;
    cost.steps = cost.sums_enumerated + probes;
    Ok((best, cost))
}
