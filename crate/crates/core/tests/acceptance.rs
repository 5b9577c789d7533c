//! Acceptance suite. Runs every criterion, prints one line each, and exits
//! non-zero if any fails.
//!
//!     cargo test -p sslab-core --test acceptance

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use sslab_core::classic::{bellman_dp, meet_in_middle, schroeppel_shamir, ResidueSampler};
use sslab_core::dispatch::{
    many_sums_list_exponent, many_sums_pair_exponent, small_bin_exponent, small_bin_parameters,
    solve_large_bin, solve_small_bin_join,
};
use sslab_core::hashing::{check_reduction_properties, reduce_bitlength};
use sslab_core::instance::pow2;
use sslab_core::numeric::{balanced_sum_entropy, entropy_around_half_bound, h};
use sslab_core::oracle::{brute_solve, distinct_sums, max_bin};
use sslab_core::structured::{solve_few_sums, solve_many_sums, solve_many_sums_amplified};
use sslab_core::verify::{run_check, Check};
use sslab_core::{gen, Error, Exec, Instance, RandomSource, Result, SolverOutcome, Subset};

/// Tables wider than this are skipped by the pseudo-polynomial DP.
const DP_TARGET_CAP: u64 = 1 << 24;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn par<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    Exec::default().map_range(0..count as u64, |i| f(i as usize))
}

fn witness_ok(instance: &Instance, out: &SolverOutcome) -> bool {
    out.witness.is_none_or(|x| instance.verify(x))
}

/// `t` replaced by the sum of a uniform subset.
fn with_planted_target(instance: &Instance, rng: &mut RandomSource) -> Instance {
    let x = Subset::from_indices((0..instance.n()).filter(|_| rng.coin()));
    instance.with_target(instance.sum_of(x))
}

fn gamma_of(instance: &Instance, m: Subset) -> Result<f64> {
    Ok((distinct_sums(instance, m)? as f64).log2() / m.len() as f64)
}

/// Compares every deterministic solver with the oracle on one instance.
/// Returns `(mismatches, dp_skipped)`.
fn cross_check(instance: &Instance) -> Result<(Vec<String>, bool)> {
    let n = instance.n();
    let truth = brute_solve(instance)?.found();
    let mut bad = Vec::new();
    let mut check = |name: &str, out: Result<SolverOutcome>| match out {
        Ok(o) if o.found() == truth && witness_ok(instance, &o) => {}
        Ok(o) => bad.push(format!("{name}: found={} expected={truth}", o.found())),
        Err(e) => bad.push(format!("{name}: {e}")),
    };
    let dp_skipped = instance.target().to_u64().is_none_or(|t| t > DP_TARGET_CAP);
    if !dp_skipped {
        check("dp", bellman_dp(instance));
    }
    check("mim", meet_in_middle(instance));
    check("ss", schroeppel_shamir(instance));
    let m = Subset::from_indices(0..n / 2);
    check("few-sums", gamma_of(instance, m).and_then(|g| solve_few_sums(instance, m, g)));
    check("large-bin", solve_large_bin(instance));
    check("small-bin/join", solve_small_bin_join(instance, 1.0 / 6.0));
    Ok((bad, dp_skipped))
}

fn structured_instance(i: usize, rng: &mut RandomSource) -> Result<Instance> {
    let n = 8 + rng.below(13) as usize;
    match i % 4 {
        0 => {
            let inst = gen::gen_geometric_pairs(n & !1)?;
            // Alternate reachable and arbitrary targets.
            Ok(if rng.coin() {
                with_planted_target(&inst, rng)
            } else {
                inst.with_target(rng.below_big(&inst.total()))
            })
        }
        1 => gen::gen_all_equal(n, 1 + rng.below(5), rng.below(6 * n as u64)),
        2 => {
            let hi = pow2(n as u64 + 1);
            let inst = gen::gen_super_increasing(n, BigUint::from(0u8))?;
            Ok(if rng.coin() {
                with_planted_target(&inst, rng)
            } else {
                inst.with_target(rng.below_big(&hi))
            })
        }
        _ => Ok(gen::gen_planted(n, 8 + rng.below(25) as u32, rng)?.0),
    }
}

fn criterion_1() -> Result<Verdict> {
    const RANDOM: usize = 2000;
    const STRUCTURED: usize = 200;
    const DENSITIES: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
    let mut rng = RandomSource::new(0xacce_0001);
    let mut streams = rng.split_n(RANDOM + STRUCTURED);
    let instances: Vec<Instance> = streams
        .iter_mut()
        .enumerate()
        .map(|(i, r)| {
            if i < RANDOM {
                let n = 8 + r.below(13) as usize;
                let inst = gen::gen_random_density(n, DENSITIES[i % 4], r)?;
                // Half get a reachable target so both answers are exercised.
                Ok(if i % 8 < 4 { with_planted_target(&inst, r) } else { inst })
            } else {
                structured_instance(i - RANDOM, r)
            }
        })
        .collect::<Result<_>>()?;
    let results = par(instances.len(), |i| cross_check(&instances[i]));
    let mut mismatches = Vec::new();
    let mut dp_skipped = 0;
    for (i, r) in results.into_iter().enumerate() {
        let (bad, skipped) = r?;
        dp_skipped += skipped as usize;
        mismatches.extend(bad.into_iter().map(|b| format!("#{i} {b}")));
    }
    Ok(verdict(
        mismatches.is_empty(),
        format!(
            "{} instances, {} mismatches{}, dp skipped on {dp_skipped} with t > 2^24",
            instances.len(),
            mismatches.len(),
            mismatches.first().map(|m| format!(" (first: {m})")).unwrap_or_default()
        ),
    ))
}

/// Weights whose first 8 items have pairwise distinct subset sums, so
/// `M = {1..8}` is sum-rich with `γ = 1`.
fn rich_weights(rng: &mut RandomSource) -> Vec<BigUint> {
    (0..16)
        .map(|k| {
            if k < 8 {
                pow2(k as u64 + 5) + BigUint::from(rng.below(4))
            } else {
                BigUint::from(1 + rng.below(1 << 16))
            }
        })
        .collect()
}

fn criterion_2() -> Result<Verdict> {
    const RUNS: usize = 200;
    let m = Subset::from_indices(0..8);
    let mut rng = RandomSource::new(0xacce_0002);
    let mut streams = rng.split_n(RUNS);
    let mut cases = Vec::with_capacity(RUNS);
    for r in streams.iter_mut() {
        let weights = rich_weights(r);
        let hidden = Subset::from_indices((0..16).filter(|_| r.coin()));
        let yes = Instance::new(weights.clone(), hidden.indices().map(|i| &weights[i]).sum())?;
        assert_eq!(distinct_sums(&yes, m)?, 256);
        let total = yes.total();
        let no = loop {
            let cand = yes.with_target(r.below_big(&total));
            if !brute_solve(&cand)?.found() {
                break cand;
            }
        };
        cases.push((yes, no, r.split()));
    }
    let outcomes = par(RUNS, |i| -> Result<(bool, bool)> {
        let (yes, no, seed) = &cases[i];
        let mut r = seed.clone();
        let hit = solve_many_sums_amplified(yes, m, 1.0, &mut r, None, None)?;
        let miss = solve_many_sums_amplified(no, m, 1.0, &mut r, None, None)?;
        Ok((hit.found() && witness_ok(yes, &hit), miss.found()))
    });
    let (mut hits, mut false_pos) = (0, 0);
    for o in outcomes {
        let (hit, fp) = o?;
        hits += hit as usize;
        false_pos += fp as usize;
    }
    let rate = hits as f64 / RUNS as f64;
    Ok(verdict(
        rate >= 0.95 && false_pos == 0,
        format!("found {hits}/{RUNS} planted ({:.1}%, need >= 95%), {false_pos} false positives on {RUNS} no-instances", 100.0 * rate),
    ))
}

/// Redraws until `t >= 2n`; smaller targets go to the DP instead of the hash.
fn hashable(
    rng: &mut RandomSource,
    draw: impl Fn(&mut RandomSource) -> Result<Instance>,
) -> Result<Instance> {
    loop {
        let inst = draw(rng)?;
        if *inst.target() >= BigUint::from(2 * inst.n() as u64) {
            return Ok(inst);
        }
    }
}

fn criterion_3() -> Result<Verdict> {
    let mut rng = RandomSource::new(0xacce_0003);

    // P1: every reduced number below 4nB·log2 B, over a spread of widths and bounds.
    let mut streams = rng.split_n(1000);
    let p1 = par(1000, |i| -> Result<bool> {
        let mut r = streams[i].clone();
        let n = 8 + r.below(9) as usize;
        let inst = hashable(&mut r, |r| Ok(with_planted_target(&gen::gen_random_density(n, 0.25, r)?, r)))?;
        // B spans the lemma's uses, from 10·|w(2^[n])| up to 2^{3n}.
        let lo = (10.0 * distinct_sums(&inst, Subset::full(n))? as f64).log2().ceil() as u64;
        let b = pow2(lo + r.below(3 * n as u64 - lo + 1));
        match reduce_bitlength(&inst, &b, &mut r) {
            Ok(rec) => Ok(check_reduction_properties(&inst, &rec, 20)?.p1),
            Err(Error::ReductionDiverged { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    });
    let p1_ok = p1.into_iter().collect::<Result<Vec<_>>>()?.iter().filter(|&&x| x).count();

    // Properties 2-4 on n = 10 with 40-bit weights.
    const N: usize = 10;
    streams = rng.split_n(2000);
    let joint = par(2000, |i| -> Result<(bool, bool)> {
        let mut r = streams[i].clone();
        let inst = hashable(&mut r, |r| {
            if i % 2 == 0 {
                Ok(gen::gen_planted(N, 40, r)?.0)
            } else {
                gen::gen_random_density(N, 0.25, r)
            }
        })?;
        let a = BigUint::from(distinct_sums(&inst, Subset::full(N))?);
        let rec = reduce_bitlength(&inst, &(&a * 10u8), &mut r)?;
        let rep = check_reduction_properties(&inst, &rec, 20)?;
        let p23 = rep.p2 == Some(true) && rep.p3 == Some(true);
        let rec = reduce_bitlength(&inst, &(&a * &a * 5u8), &mut r)?;
        let p4 = check_reduction_properties(&inst, &rec, 20)?.p4 == Some(true);
        Ok((p23, p4))
    });
    let (mut p23, mut p4) = (0usize, 0usize);
    for j in joint {
        let (a, b) = j?;
        p23 += a as usize;
        p4 += b as usize;
    }
    let p23_rate = p23 as f64 / 2000.0;
    let p4_rate = p4 as f64 / 2000.0;
    let need = 1.0 / (10.0 * N as f64);
    Ok(verdict(
        p1_ok == 1000 && p23_rate >= need && p4_rate >= 0.6,
        format!(
            "P1 {p1_ok}/1000; P2&P3 {p23}/2000 ({p23_rate:.3}, need >= {need:.3}); P4 {p4}/2000 ({p4_rate:.3}, need >= 0.6)"
        ),
    ))
}

fn corpus_instance(i: usize, n: usize, rng: &mut RandomSource) -> Result<Instance> {
    match i % 6 {
        0..=2 => {
            let d = [0.5, 1.0, 2.0, 4.0][rng.below(4) as usize];
            Ok(with_planted_target(&gen::gen_random_density(n, d, rng)?, rng))
        }
        3 => gen::gen_all_equal(n, 1 + rng.below(3), rng.below(n as u64)),
        4 if n.is_multiple_of(2) => gen::gen_geometric_pairs(n),
        4 => gen::gen_super_increasing(n, BigUint::from(rng.below(1 << n))),
        _ => Ok(gen::gen_planted(n, n as u32, rng)?.0),
    }
}

fn criterion_4() -> Result<Verdict> {
    let mut rng = RandomSource::new(0xacce_0004);
    let mut run = |check: Check, n_lo: usize, n_hi: usize| -> Result<(usize, Vec<String>)> {
        let streams = rng.split_n(200);
        let res = par(200, |i| -> Result<(bool, String)> {
            let r = &mut streams[i].clone();
            let n = n_lo + r.below((n_hi - n_lo + 1) as u64) as usize;
            let inst = corpus_instance(i, n, r)?;
            let c = run_check(check, &format!("{check}#{i}"), &inst)?;
            Ok((c.passed, format!("{} n={}: {}", c.label, c.n, c.detail)))
        });
        let mut fails = Vec::new();
        for r in res {
            let (ok, d) = r?;
            if !ok {
                fails.push(d);
            }
        }
        Ok((200, fails))
    };
    let mut parts = Vec::new();
    let mut all_ok = true;
    for (check, lo, hi) in [(Check::L2Identity, 2, 14), (Check::CauchySchwarz, 2, 10), (Check::Udcp, 2, 14)] {
        let (total, fails) = run(check, lo, hi)?;
        all_ok &= fails.is_empty();
        parts.push(format!(
            "{check} {}/{total}{}",
            total - fails.len(),
            fails.first().map(|f| format!(" (first failure {f})")).unwrap_or_default()
        ));
    }
    Ok(verdict(all_ok, parts.join("; ")))
}

fn criterion_5() -> Result<Verdict> {
    let mut rng = RandomSource::new(0xacce_0005);
    let mut notes = Vec::new();
    let mut ok = true;

    // Classic solvers, five instances per width.
    let mut worst_mim = 0.0f64;
    let mut worst_ss = 0.0f64;
    for n in 8..=24usize {
        for k in 0..5 {
            let inst = if k % 2 == 0 {
                gen::gen_planted(n, n as u32, &mut rng)?.0
            } else {
                gen::gen_random_density(n, 1.0, &mut rng)?
            };
            let mim = meet_in_middle(&inst)?;
            worst_mim = worst_mim.max(mim.cost.sums_enumerated as f64 / (n as f64 / 2.0).exp2());
            let ss = schroeppel_shamir(&inst)?;
            worst_ss = worst_ss.max(ss.cost.peak_retained as f64 / (n as f64 / 4.0).exp2());
        }
    }
    ok &= worst_mim <= 4.0 && worst_ss <= 8.0;
    notes.push(format!("mim sums/2^(n/2) max {worst_mim:.2} (<= 4)"));
    notes.push(format!("ss peak/2^(n/4) max {worst_ss:.2} (<= 8)"));

    // One pass of the many-sums solver, n = 16, M = first 8 items.
    const RUNS: usize = 200;
    const N: usize = 16;
    let m = Subset::from_indices(0..8);
    let streams = rng.split_n(RUNS);
    let runs = par(RUNS, |i| -> Result<(f64, f64, f64, f64)> {
        let r = &mut streams[i].clone();
        let (inst, _) = gen::gen_planted(N, 16, r)?;
        let gamma = gamma_of(&inst, m)?.min(1.0);
        let beta = max_bin(&inst)? as f64;
        let out = solve_many_sums(&inst, m, gamma, r, None)?;
        let (mut list, mut list_bound) = (0.0, 0.0);
        for it in out.iterations.iter().filter(|it| !it.skipped) {
            list += it.left_len as f64;
            let pi_m = (gamma - 1.0) * m.len() as f64 + it.s as f64;
            list_bound += it.left_space / pi_m.exp2();
        }
        let pairs: u64 = out.iterations.iter().map(|it| it.pairs_scanned).sum();
        let mu = m.len() as f64 / N as f64;
        let pair_bound = (N * N) as f64 * beta * (mu * (1.5 - gamma) * N as f64).exp2();
        Ok((list, list_bound, pairs as f64, pair_bound))
    });
    let (mut list, mut list_bound, mut pairs, mut pair_bound) = (0.0, 0.0, 0.0, 0.0);
    for r in runs {
        let (a, b, c, d) = r?;
        list += a;
        list_bound += b;
        pairs += c;
        pair_bound += d;
    }
    let list_ratio = list / list_bound;
    let pair_ratio = pairs / pair_bound;
    ok &= list_ratio <= 8.0 && pair_ratio <= 8.0;
    notes.push(format!("mean |L| / mean W_L/2^(pi|M|) = {list_ratio:.3} (<= 8)"));
    notes.push(format!("mean pairs / mean n^2 beta 2^(mu(1.5-gamma)n) = {pair_ratio:.2e} (<= 8)"));
    Ok(verdict(ok, notes.join("; ")))
}

fn criterion_6() -> Result<Verdict> {
    type Q = Ratio<i64>;
    let coefficient = |e: Q| Q::new(1, 2) - e / 4 + Q::new(3, 4) * e * e;
    let exact = coefficient(Q::new(1, 6)) == Q::new(23, 48);
    let float = (small_bin_exponent(1.0 / 6.0) - 23.0 / 48.0).abs() < 1e-15;

    let mut worst = 0.0f64;
    let mut symbolic = true;
    for e in [Q::new(1, 100), Q::new(1, 12), Q::new(1, 6)] {
        let (mu, gamma) = (Q::new(3, 2) * e, Q::from(1) - e / 2);
        // First term, evaluated from its definition and from the expansion.
        let list = Q::new(1, 2) + Q::new(8113, 10000) * mu - gamma * mu;
        let list_expanded = Q::new(1, 2) - Q::new(28305, 100000) * e + Q::new(3, 4) * e * e;
        let pair = Q::new(1, 2) - e + (Q::new(3, 2) - gamma) * mu;
        symbolic &= list == list_expanded && pair == coefficient(e);

        let ef = e.to_f64().unwrap();
        let (muf, gf) = small_bin_parameters(ef);
        worst = worst
            .max((many_sums_list_exponent(muf, gf) - list.to_f64().unwrap()).abs())
            .max((many_sums_pair_exponent(0.5 - ef, muf, gf) - pair.to_f64().unwrap()).abs())
            .max((small_bin_exponent(ef) - coefficient(e).to_f64().unwrap()).abs());
    }
    Ok(verdict(
        exact && float && symbolic && worst <= 1e-12,
        format!("coefficient(1/6) = 23/48: {exact}; expansions exact: {symbolic}; max float error {worst:.1e} (<= 1e-12)"),
    ))
}

fn criterion_7() -> Result<Verdict> {
    // Concavity: 100 values of σ times 100 splits.
    let mut concave = 0usize;
    let mut concave_total = 0usize;
    for a in 0..100 {
        let sigma = (a + 1) as f64 / 100.0;
        for b in 0..100 {
            let s1 = sigma * b as f64 / 99.0;
            let s2 = sigma - s1;
            concave_total += 1;
            concave += (h(s1) + h(s2) <= 2.0 * h(sigma / 2.0) + 1e-12) as usize;
        }
    }
    let mut fact = 0usize;
    for k in 0..1000 {
        fact += entropy_around_half_bound(0.5 * k as f64 / 999.0)? as usize;
    }
    // g(σ, ·) on a τ grid of step 1e-6.
    const STEPS: usize = 1_000_000;
    let mut g_ok = 0usize;
    let sigmas: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
    for &sigma in &sigmas {
        let (mut best, mut arg) = (f64::MIN, 0.0);
        for k in 0..=STEPS {
            let tau = k as f64 / STEPS as f64;
            let g = balanced_sum_entropy(sigma, tau);
            if g > best {
                best = g;
                arg = tau;
            }
        }
        let at_half = balanced_sum_entropy(sigma, 0.5);
        let closed = 1.0 + h(sigma / 2.0);
        g_ok += ((arg - 0.5).abs() <= 1e-6 && best - at_half <= 1e-12 && (at_half - closed).abs() <= 1e-12) as usize;
    }
    Ok(verdict(
        concave == concave_total && fact == 1000 && g_ok == sigmas.len(),
        format!(
            "concavity {concave}/{concave_total}; h(1/2-a) bound {fact}/1000; g max at 1/2 for {g_ok}/{} sigma",
            sigmas.len()
        ),
    ))
}

fn criterion_8() -> Result<Verdict> {
    const SAMPLES: usize = 100_000;
    const Q: u64 = 3;
    let inst = gen::gen_all_equal(8, 1, 4)?;
    let sampler = ResidueSampler::new(&inst, Q)?;
    let residue = sampler.target_residue();
    // Sizes 1, 4, 7 are ≡ 1 (mod 3): 8 + 70 + 8 subsets.
    let class: Vec<u64> = (0u64..256).filter(|m| m.count_ones() as u64 % Q == residue).collect();
    let size_ok = class.len() == 86 && sampler.class_size(residue) == 86;

    let mut counts = vec![0u64; 256];
    let mut rng = RandomSource::new(0xacce_0008);
    let mut outside = 0usize;
    for _ in 0..SAMPLES {
        let x = sampler.sample(residue, &mut rng).expect("class is non-empty");
        outside += (x.mask().count_ones() as u64 % Q != residue) as usize;
        counts[x.mask() as usize] += 1;
    }
    let expected = SAMPLES as f64 / class.len() as f64;
    let stat: f64 = class
        .iter()
        .map(|&m| (counts[m as usize] as f64 - expected).powi(2) / expected)
        .sum();
    let dof = (class.len() - 1) as f64;
    let critical = ChiSquared::new(dof).expect("positive dof").inverse_cdf(0.999);
    Ok(verdict(
        size_ok && outside == 0 && stat <= critical,
        format!("class size 86: {size_ok}; chi2 = {stat:.1} on {dof} dof (critical {critical:.1} at 0.001); {outside} off-class draws"),
    ))
}

type Criterion = fn() -> Result<Verdict>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("oracle equivalence", criterion_1),
        ("many-sums completeness", criterion_2),
        ("hashing statistics", criterion_3),
        ("bin identities", criterion_4),
        ("counter scaling", criterion_5),
        ("exponent arithmetic", criterion_6),
        ("numeric properties", criterion_7),
        ("sampler uniformity", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = f().unwrap_or_else(|e| verdict(false, format!("error: {e}")));
        failed += !v.passed as usize;
        println!(
            "criterion {} [{}] {name}: {} ({:.1}s)",
            k + 1,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
