use crate::classic::{CostCounters, IterationRecord, SolverOutcome};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::instance::{Instance, Subset};
use crate::rng::RandomSource;
use crate::with_words;
use crate::word::SumWord;

use super::filtered::build_core;
use super::params::{check_shape, draw_modulus, fill_params, Modulus, ReprParams};

/// Multiplier applied to the predicted list-building work to get the default budget.
pub const BUDGET_FACTOR: f64 = 64.0;

fn total_of<W: SumWord>(w: &[W]) -> W {
    w.iter().fold(W::zero(), |acc, x| acc.add(x))
}

fn m_items(m: Subset) -> Vec<usize> {
    m.indices().collect()
}

/// Verifies `|w(2^M)| >= 2^{γ|M|}` and returns the measured count.
fn check_sum_rich(instance: &Instance, m: Subset, gamma: f64) -> Result<usize> {
    let k = m.len();
    let distinct = crate::oracle::distinct_sums(instance, m)?;
    if (distinct as f64).log2() + 1e-9 < gamma * k as f64 {
        return Err(Error::Contract(format!(
            "M generates {distinct} sums, fewer than 2^({gamma}·{k})"
        )));
    }
    Ok(distinct)
}

/// Predicted list-building work of one full pass: over both targets, every
/// `s`, and every `s₁ <= s₂`, `W^{1/2} + W/2^{π|M|}` for each side.
pub fn predicted_pass_steps(n: usize, m_size: usize, gamma: f64) -> f64 {
    let mut total = 0.0;
    let unit = Modulus {
        p: 3,
        t_l: 0,
        clamped: false,
    };
    for s in m_size.div_ceil(2)..=m_size {
        for s1 in 0..=s / 2 {
            let q = fill_params(n, m_size, gamma, s, s1, unit);
            let modulus = q.nominal_modulus().max(1.0);
            let (wl, wr) = (q.left_space(), q.right_space());
            total += wl.sqrt() + wl / modulus + wr.sqrt() + wr / modulus;
        }
    }
    2.0 * total
}

/// `64·n²·(predicted pass work)`, the stand-in for "twice the expected steps".
pub fn default_step_budget(n: usize, m_size: usize, gamma: f64) -> u64 {
    let b = BUDGET_FACTOR * (n * n) as f64 * predicted_pass_steps(n, m_size, gamma);
    if b >= u64::MAX as f64 {
        u64::MAX
    } else {
        b.ceil() as u64
    }
}

struct Pass<'a> {
    exec: Exec,
    budget: u64,
    cost: CostCounters,
    iterations: Vec<IterationRecord>,
    items_m: &'a [usize],
}

enum Step {
    Found(u64),
    Continue,
    OutOfBudget,
}

impl Pass<'_> {
    fn over_budget(&self) -> bool {
        self.cost.steps > self.budget
    }

    fn iterate<W: SumWord>(
        &mut self,
        weights: &[W],
        target: &W,
        rest: &[usize],
        q: &ReprParams,
        complemented: bool,
    ) -> Step {
        let (l_items, r_items) = rest.split_at(q.l_size);
        let r_residue = (target.residue(q.p) + q.p - q.t_l) % q.p;
        let mut record = IterationRecord {
            complemented,
            s: q.s,
            s1: q.s1,
            s2: q.s2,
            prime: q.p,
            t_l: q.t_l,
            left_len: 0,
            right_len: 0,
            pairs_scanned: 0,
            left_space: q.left_space(),
            right_space: q.right_space(),
            skipped: false,
        };
        let items_m = self.items_m;
        let (left, right) = self.exec.join(
            || build_core(weights, l_items, items_m, q.s1, q.p, q.t_l, q.left_split()),
            || build_core(weights, r_items, items_m, q.s2, q.p, r_residue, q.right_split()),
        );
        let (mut left, right) = match (left, right) {
            (Ok(l), Ok(r)) => (l, r),
            (Err(e), _) | (_, Err(e)) => {
                if !matches!(e, Error::Capacity { .. }) {
                    unreachable!("list construction only fails on capacity: {e}");
                }
                record.skipped = true;
                self.iterations.push(record);
                return Step::Continue;
            }
        };
        record.left_len = left.entries.len() as u64;
        record.right_len = right.entries.len() as u64;
        for w in [&left, &right] {
            self.cost.sums_enumerated += w.enumerated;
            self.cost.dict_lookups += w.lookups;
            self.cost.steps += w.enumerated + w.lookups;
        }
        self.cost.peak_retained = self
            .cost
            .peak_retained
            .max((left.entries.len() + right.entries.len()) as u64);
        if self.over_budget() {
            self.iterations.push(record);
            return Step::OutOfBudget;
        }

        self.exec.sort_unstable(&mut left.entries);
        let mut result = Step::Continue;
        'scan: for (wt, t_mask) in &right.entries {
            let Some(need) = target.checked_sub(wt) else {
                continue;
            };
            self.cost.dict_lookups += 1;
            self.cost.steps += 1;
            let lo = left.entries.partition_point(|e| e.0 < need);
            for (_, s_mask) in left.entries[lo..].iter().take_while(|e| e.0 == need) {
                record.pairs_scanned += 1;
                self.cost.pairs_checked += 1;
                self.cost.steps += 1;
                if s_mask & t_mask == 0 {
                    result = Step::Found(s_mask | t_mask);
                    break 'scan;
                }
            }
            if self.over_budget() {
                result = Step::OutOfBudget;
                break;
            }
        }
        self.iterations.push(record);
        result
    }
}

/// One pass of the representation-technique solver: both the target and the
/// complementary target, every `s ∈ [⌈|M|/2⌉, |M|]`, and every split
/// `s₁ <= s₂`. Fresh `(p, t_L)` are drawn per `(target, s)`.
///
/// Requires `|M| <= n/2` and `|w(2^M)| >= 2^{γ|M|}`. A pass that exceeds
/// `step_budget` stops with no witness and `budget_exhausted` set.
pub fn solve_many_sums(
    instance: &Instance,
    m: Subset,
    gamma: f64,
    rng: &mut RandomSource,
    step_budget: Option<u64>,
) -> Result<SolverOutcome> {
    solve_many_sums_with(instance, m, gamma, rng, step_budget, Exec::default())
}

pub fn solve_many_sums_with(
    instance: &Instance,
    m: Subset,
    gamma: f64,
    rng: &mut RandomSource,
    step_budget: Option<u64>,
    exec: Exec,
) -> Result<SolverOutcome> {
    let n = instance.n();
    let k = check_shape(n, m, gamma)?;
    check_sum_rich(instance, m, gamma)?;
    let budget = step_budget.unwrap_or_else(|| default_step_budget(n, k, gamma));
    let items_m = m_items(m);
    let rest: Vec<usize> = (0..n).filter(|i| !m.contains(*i)).collect();
    let full = Subset::full(n).mask();
    let mut pass = Pass {
        exec,
        budget,
        cost: CostCounters::default(),
        iterations: Vec::new(),
        items_m: &items_m,
    };

    let step = with_words!(instance, |w, t| {
        let total = total_of(w);
        let mut targets = vec![(t.to_owned(), false)];
        if let Some(c) = SumWord::checked_sub(&total, t) {
            targets.push((c, true));
        }
        let mut outcome = Ok(Step::Continue);
        'outer: for (target, complemented) in &targets {
            for s in k.div_ceil(2)..=k {
                let modulus = match draw_modulus(k, gamma, s, rng) {
                    Ok(md) => md,
                    Err(e) => {
                        outcome = Err(e);
                        break 'outer;
                    }
                };
                for s1 in 0..=s / 2 {
                    let q = fill_params(n, k, gamma, s, s1, modulus);
                    match pass.iterate(w, target, &rest, &q, *complemented) {
                        Step::Found(mask) => {
                            let mask = if *complemented { full & !mask } else { mask };
                            outcome = Ok(Step::Found(mask));
                            break 'outer;
                        }
                        Step::OutOfBudget => {
                            outcome = Ok(Step::OutOfBudget);
                            break 'outer;
                        }
                        Step::Continue => {}
                    }
                }
            }
        }
        outcome
    })?;

    let (candidate, exhausted) = match step {
        Step::Found(mask) => (Some(Subset(mask)), false),
        Step::OutOfBudget => (None, true),
        Step::Continue => (None, false),
    };
    let mut out = SolverOutcome::from_candidate(instance, candidate, pass.cost);
    out.budget_exhausted = exhausted;
    out.iterations = pass.iterations;
    Ok(out.with_branch("many-sums"))
}

/// Repeats [`solve_many_sums`] for up to `passes` independent passes (default
/// `n²`), each with its own split of `rng`, stopping at the first witness.
/// Iteration records are kept for the final pass only.
pub fn solve_many_sums_amplified(
    instance: &Instance,
    m: Subset,
    gamma: f64,
    rng: &mut RandomSource,
    passes: Option<usize>,
    step_budget: Option<u64>,
) -> Result<SolverOutcome> {
    let n = instance.n();
    let passes = passes.unwrap_or((n * n).max(1));
    let mut cost = CostCounters::default();
    let mut last = None;
    for _ in 0..passes {
        let mut stream = rng.split();
        let out = solve_many_sums(instance, m, gamma, &mut stream, step_budget)?;
        cost.absorb(&out.cost);
        let found = out.found();
        last = Some(out);
        if found {
            break;
        }
    }
    let mut out = last.unwrap_or_else(|| SolverOutcome::none(CostCounters::default()));
    out.cost = cost;
    Ok(out)
}
