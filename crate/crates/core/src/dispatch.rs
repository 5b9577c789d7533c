//! Top-level drivers: the small-bin solver, the large-bin solver, and the
//! density-reduction pipeline, plus the regime classifier.

use num_bigint::BigUint;
use serde::Serialize;

use crate::classic::{bellman_dp, meet_in_middle, CostCounters, SolverOutcome};
use crate::error::{Error, Result};
use crate::hashing::{already_short, reduce_bitlength};
use crate::instance::{pow2, Instance, Subset};
use crate::oracle;
use crate::rng::RandomSource;
use crate::structured::{solve_few_sums, solve_many_sums};
use crate::sumset::{join_min_mask, SumSet};
use crate::with_words;
use crate::word::{log2_big, SumWord};

/// Largest bin exponent covered by the small-bin driver in the pipeline's first step.
pub const PIPELINE_EPSILON: f64 = 0.0004;
/// Step-one running-time exponent of the pipeline.
pub const PIPELINE_EXPONENT: f64 = 0.49991;
/// Default constant `C` in the step-one budget `C·2^{0.49991n}·n²`.
pub const PIPELINE_BUDGET_FACTOR: f64 = 4.0;
/// Large-bin regime: `β(w) >= 2^{0.661n}`.
pub const LARGE_BIN_EXPONENT: (u64, u64) = (661, 1000);
/// Many-sums regime: `|w(2^[n])| >= 2^{0.997n}`.
pub const MANY_SUMS_EXPONENT: (u64, u64) = (997, 1000);
/// Bin bound implied by many sums: `β(w) <= 2^{0.4996n}`.
pub const SUMS_VS_BIN_EXPONENT: (u64, u64) = (1249, 2500);

/// `0.5 - ε/4 + 3ε²/4`: the small-bin driver's running-time exponent.
pub fn small_bin_exponent(epsilon: f64) -> f64 {
    0.5 - epsilon / 4.0 + 0.75 * epsilon * epsilon
}

/// `0.5 + 0.8113μ - γμ`: list construction in the many-sums solver.
pub fn many_sums_list_exponent(mu: f64, gamma: f64) -> f64 {
    0.5 + 0.8113 * mu - gamma * mu
}

/// `b + (1.5 - γ)μ` for `β(w) = 2^{bn}`: the many-sums pair scan.
pub fn many_sums_pair_exponent(bin_exponent: f64, mu: f64, gamma: f64) -> f64 {
    bin_exponent + (1.5 - gamma) * mu
}

/// `(μ, γ) = (3ε/2, 1 - ε/2)`.
pub fn small_bin_parameters(epsilon: f64) -> (f64, f64) {
    (1.5 * epsilon, 1.0 - epsilon / 2.0)
}

/// Exact `x <= 2^{(num/den)·n}`, by comparing `x^den` with `2^{num·n}`.
pub fn at_most_pow2(x: &BigUint, (num, den): (u64, u64), n: usize) -> bool {
    x.pow(den as u32) <= pow2(num * n as u64)
}

/// Exact `x >= 2^{(num/den)·n}`.
pub fn at_least_pow2(x: &BigUint, (num, den): (u64, u64), n: usize) -> bool {
    x.pow(den as u32) >= pow2(num * n as u64)
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon <= 1.0 / 6.0) {
        return Err(Error::Domain(format!("epsilon = {epsilon} outside (0, 1/6]")));
    }
    Ok(())
}

/// How the small-bin driver partitions the instance and which branch it takes.
#[derive(Clone, Debug, Serialize)]
pub struct SmallBinPlan {
    pub mu: f64,
    pub gamma: f64,
    /// Consecutive index blocks of size `⌈μn⌉`.
    pub parts: Vec<Subset>,
    pub distinct: Vec<usize>,
    /// `2^{γμn}`.
    pub richness_threshold: f64,
    /// First part with at least `2^{γμn}` sums that is small enough to serve as `M`.
    pub rich_part: Option<usize>,
    /// The join branch's left side: the first `⌈k/2⌉` parts.
    pub left: Subset,
}

/// Partitions `[n]` and measures every part; no solving.
pub fn plan_small_bin(instance: &Instance, epsilon: f64) -> Result<SmallBinPlan> {
    check_epsilon(epsilon)?;
    let n = instance.n();
    let (mu, gamma) = small_bin_parameters(epsilon);
    let size = ((mu * n as f64 - 1e-9).ceil() as usize).max(1);
    let parts: Vec<Subset> = (0..n)
        .collect::<Vec<_>>()
        .chunks(size)
        .map(|c| Subset::from_indices(c.iter().copied()))
        .collect();
    let distinct = parts
        .iter()
        .map(|&p| oracle::distinct_sums(instance, p))
        .collect::<Result<Vec<_>>>()?;
    let richness_threshold = (gamma * mu * n as f64).exp2();
    let rich_part = (0..parts.len())
        .find(|&k| distinct[k] as f64 >= richness_threshold && 2 * parts[k].len() <= n);
    let left = parts[..parts.len().div_ceil(2)]
        .iter()
        .fold(Subset::EMPTY, |acc, &p| acc.union(p));
    Ok(SmallBinPlan {
        mu,
        gamma,
        parts,
        distinct,
        richness_threshold,
        rich_part,
        left,
    })
}

fn join_core<W: SumWord>(w: &[W], t: &W, left: &[usize], right: &[usize]) -> Result<(Option<u64>, CostCounters)> {
    let l = SumSet::build(w, left)?;
    let r = SumSet::build(w, right)?;
    let (best, probes) = join_min_mask(&l, &r, t);
    Ok((
        best,
        CostCounters {
            sums_enumerated: l.work + r.work,
            dict_lookups: probes,
            peak_retained: (l.len() + r.len()) as u64,
            steps: l.work + r.work + probes,
            ..CostCounters::default()
        },
    ))
}

/// Upper bound on `|w(2^L)| + |w(2^R)|` from the per-part counts.
fn predicted_join_work(plan: &SmallBinPlan) -> f64 {
    let half = plan.parts.len().div_ceil(2);
    let prod = |r: &[usize]| r.iter().map(|&d| d as f64).product::<f64>();
    prod(&plan.distinct[..half]) + prod(&plan.distinct[half..])
}

/// The sum-poor branch: exact join of `L` (the first half of the parts) and `R`.
pub fn solve_small_bin_join(instance: &Instance, epsilon: f64) -> Result<SolverOutcome> {
    let plan = plan_small_bin(instance, epsilon)?;
    run_join(instance, &plan)
}

fn run_join(instance: &Instance, plan: &SmallBinPlan) -> Result<SolverOutcome> {
    let n = instance.n();
    let left: Vec<usize> = plan.left.indices().collect();
    let right: Vec<usize> = (0..n).filter(|i| !plan.left.contains(*i)).collect();
    let (best, cost) = with_words!(instance, |w, t| join_core(w, t, &left, &right))?;
    Ok(SolverOutcome::from_candidate(instance, best.map(Subset), cost).with_branch("small-bin/join"))
}

/// Small-bin driver. Hashes with `B = 2^{3n}` unless the numbers are already
/// that short, then either runs the many-sums solver on a sum-rich part
/// (amplified over `n²` passes) or the exact join. `budget` caps the total
/// steps; the join branch is refused up front if its predicted work exceeds it.
pub fn solve_small_bin(
    instance: &Instance,
    epsilon: f64,
    rng: &mut RandomSource,
    budget: Option<u64>,
) -> Result<SolverOutcome> {
    check_epsilon(epsilon)?;
    let n = instance.n();
    let b = pow2(3 * n as u64);
    let mut hashed = false;
    let mut work = instance.clone();
    if !already_short(instance, &b) {
        match reduce_bitlength(instance, &b, rng) {
            Ok(rec) => {
                work = rec.reduced;
                hashed = true;
            }
            Err(Error::UseDp { .. }) => return Ok(bellman_dp(instance)?.with_branch("small-bin/dp")),
            Err(e) => return Err(e),
        }
    }
    let plan = plan_small_bin(&work, epsilon)?;
    let mut out = match plan.rich_part {
        Some(k) => {
            let m = plan.parts[k];
            // Parts are ⌈μn⌉ wide; restate the richness bound for that width.
            let gamma = (plan.gamma * plan.mu * n as f64 / m.len() as f64).min(1.0);
            let mut cost = CostCounters::default();
            let mut last = SolverOutcome::none(CostCounters::default());
            let mut exhausted = false;
            for _ in 0..(n * n).max(1) {
                let remaining = budget.map(|b| b.saturating_sub(cost.steps));
                if remaining == Some(0) {
                    exhausted = true;
                    break;
                }
                let mut stream = rng.split();
                let pass = solve_many_sums(&work, m, gamma, &mut stream, remaining)?;
                cost.absorb(&pass.cost);
                let found = pass.found();
                exhausted = pass.budget_exhausted && budget.is_some();
                last = pass;
                if found || exhausted {
                    break;
                }
            }
            last.cost = cost;
            last.budget_exhausted = exhausted && !last.found();
            last.with_branch("small-bin/many-sums")
        }
        None => {
            if budget.is_some_and(|b| predicted_join_work(&plan) > b as f64) {
                let mut none = SolverOutcome::none(CostCounters::default()).with_branch("small-bin/join");
                none.budget_exhausted = true;
                return Ok(none);
            }
            run_join(&work, &plan)?
        }
    };
    if hashed {
        out = out.reverify(instance);
    }
    Ok(out)
}

/// Large-bin driver: of the first and last `⌊n/2⌋` items, the side with fewer
/// distinct sums becomes `M` for the few-sums solver with `γ = log2(count)/|M|`.
/// For odd `n` the middle item is in neither side. Exact.
pub fn solve_large_bin(instance: &Instance) -> Result<SolverOutcome> {
    let n = instance.n();
    let half = n / 2;
    if half == 0 {
        return Ok(meet_in_middle(instance)?.with_branch("large-bin/trivial"));
    }
    let s = Subset::from_indices(0..half);
    let t = Subset::from_indices(n - half..n);
    let ds = oracle::distinct_sums(instance, s)?;
    let dt = oracle::distinct_sums(instance, t)?;
    let (m, count) = if dt < ds { (t, dt) } else { (s, ds) };
    let gamma = ((count as f64).log2() / half as f64).clamp(0.0, 1.0);
    Ok(solve_few_sums(instance, m, gamma)?.with_branch("large-bin"))
}

/// `C·2^{0.49991n}·n²`.
pub fn pipeline_step_budget(n: usize, factor: f64) -> u64 {
    let b = factor * (PIPELINE_EXPONENT * n as f64).exp2() * (n * n) as f64;
    if b >= u64::MAX as f64 {
        u64::MAX
    } else {
        b.ceil() as u64
    }
}

/// The density-reduction pipeline. Step 1 runs the small-bin driver with `ε`
/// (default 0.0004) under `budget` (default `4·2^{0.49991n}·n²`). If that
/// runs out, step 2 hashes with `B = 10·2^{⌈0.997n⌉}` and solves the reduced
/// instance with meet-in-the-middle as the dense-instance solver. Witnesses
/// from step 2 are re-verified against the original instance.
pub fn solve_auto(
    instance: &Instance,
    rng: &mut RandomSource,
    budget: Option<u64>,
    epsilon: Option<f64>,
) -> Result<SolverOutcome> {
    let n = instance.n();
    let budget = budget.unwrap_or_else(|| pipeline_step_budget(n, PIPELINE_BUDGET_FACTOR));
    let epsilon = epsilon.unwrap_or(PIPELINE_EPSILON);
    let first = solve_small_bin(instance, epsilon, rng, Some(budget))?;
    if !first.budget_exhausted {
        let branch = format!("auto/step1/{}", first.branch.as_deref().unwrap_or("?"));
        return Ok(first.with_branch(branch));
    }
    let mut cost = first.cost.clone();
    let b = pow2((0.997 * n as f64).ceil() as u64) * 10u8;
    let out = match reduce_bitlength(instance, &b, rng) {
        Ok(rec) => {
            let dense = meet_in_middle(&rec.reduced)?;
            cost.absorb(&dense.cost);
            let mut out = dense.reverify(instance);
            out.cost = cost;
            out.with_branch("auto/step2/hash+mim")
        }
        Err(Error::UseDp { .. }) => {
            let dp = bellman_dp(instance)?;
            cost.absorb(&dp.cost);
            let mut out = dp;
            out.cost = cost;
            out.with_branch("auto/step2/dp")
        }
        Err(Error::ReductionDiverged { .. }) => {
            SolverOutcome::none(cost).with_branch("auto/step2/diverged")
        }
        Err(e) => return Err(e),
    };
    Ok(out)
}

/// Bin and sum statistics of one instance and the regimes it falls in.
#[derive(Clone, Debug, Serialize)]
pub struct RegimeReport {
    pub n: usize,
    pub beta: u64,
    pub distinct_sums: usize,
    pub density: Option<f64>,
    pub log2_beta: f64,
    pub log2_distinct: f64,
    pub epsilon: f64,
    /// `β <= 2^{(0.5-ε)n}`.
    pub small_bin: bool,
    /// `β >= 2^{0.661n}`.
    pub large_bin: bool,
    /// `|w(2^[n])| >= 2^{0.997n}`.
    pub many_sums: bool,
    /// Many sums imply `β <= 2^{0.4996n}`.
    pub sums_vs_bin_holds: bool,
    pub regime: &'static str,
}

/// Classifies an instance by exhaustive enumeration.
pub fn classify(instance: &Instance, oracle_limit: usize, epsilon: f64) -> Result<RegimeReport> {
    check_epsilon(epsilon)?;
    let n = instance.n();
    if n > oracle_limit {
        return Err(Error::capacity("oracle width", n as u128, oracle_limit as u128));
    }
    let beta = oracle::max_bin(instance)?;
    let distinct = oracle::distinct_sums(instance, Subset::full(n))?;
    let (b, d) = (BigUint::from(beta), BigUint::from(distinct));
    let log2_beta = (beta as f64).log2();
    // The ε threshold is compared in floating point; ties go to the small side.
    let small_bin = log2_beta <= (0.5 - epsilon) * n as f64 + 1e-9;
    let large_bin = at_least_pow2(&b, LARGE_BIN_EXPONENT, n);
    let many_sums = at_least_pow2(&d, MANY_SUMS_EXPONENT, n);
    let sums_vs_bin_holds = !many_sums || at_most_pow2(&b, SUMS_VS_BIN_EXPONENT, n);
    let regime = match (small_bin, large_bin) {
        (true, _) => "small-bin",
        (false, true) => "large-bin",
        (false, false) => "gap",
    };
    Ok(RegimeReport {
        n,
        beta,
        distinct_sums: distinct,
        density: instance.density().ok(),
        log2_beta,
        log2_distinct: (distinct as f64).log2(),
        epsilon,
        small_bin,
        large_bin,
        many_sums,
        sums_vs_bin_holds,
        regime,
    })
}

/// Solves with the branch [`classify`] points to: small-bin (join or many-sums)
/// or large-bin. The gap regime uses the large-bin solver, which is exact.
pub fn solve_classified(
    instance: &Instance,
    report: &RegimeReport,
    rng: &mut RandomSource,
) -> Result<SolverOutcome> {
    if report.small_bin {
        solve_small_bin(instance, report.epsilon, rng, None)
    } else {
        solve_large_bin(instance)
    }
}

/// `log2` of the reduced target, for measuring the pipeline's density.
pub fn log2_target(instance: &Instance) -> f64 {
    log2_big(instance.target())
}
