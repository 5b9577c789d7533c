//! `sslab`: generate, analyze, solve, hash, and verify Subset Sum instances.
//!
//! Results go to stdout as one JSON object per line; summaries go to stderr.
//! Exit status is 0 on success, 1 on errors, 2 on usage errors, and 3 when
//! `verify` finds a violated invariant.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use sslab_core::classic::{
    bellman_dp, meet_in_middle, modular_sampler, schroeppel_shamir, CostCounters, SolverOutcome,
};
use sslab_core::dispatch::{classify, solve_auto, solve_large_bin, solve_small_bin};
use sslab_core::hashing::{reduce_bitlength, reduced_bits};
use sslab_core::oracle::{brute_solve, distinct_sums, enumerate_histogram};
use sslab_core::structured::{solve_few_sums, solve_many_sums_amplified};
use sslab_core::verify::{corpus, run_check, Check};
use sslab_core::{gen, Error, Instance, RandomSource, Subset};

#[derive(Parser)]
#[command(name = "sslab", version, about = "Exact Subset Sum solvers and oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance.
    Gen(GenArgs),
    /// Report n, density, distinct sums, and the largest bin.
    Analyze(AnalyzeArgs),
    /// Report which bin-size regimes an instance falls in.
    Classify(ClassifyArgs),
    /// Solve an instance with one algorithm.
    Solve(SolveArgs),
    /// Reduce bit-lengths modulo a random prime.
    Hash(HashArgs),
    /// Check combinatorial invariants over an instance or a seeded corpus.
    Verify(VerifyArgs),
    /// Sweep n for one algorithm and write counters as CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Density,
    Geometric,
    Planted,
    Equal,
    Superinc,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    /// Density for `density` instances.
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    /// Weight bits for `planted` instances.
    #[arg(long, default_value_t = 16)]
    bits: u32,
    /// Common weight for `equal` instances.
    #[arg(long, default_value_t = 1)]
    value: u64,
    /// Target for `equal` and `superinc` instances.
    #[arg(long)]
    target: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the instance here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    input: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 0.125)]
    epsilon: f64,
    #[arg(long, default_value_t = 24)]
    oracle_limit: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Alg {
    Brute,
    Dp,
    Mim,
    Ss,
    Sampler,
    Repr,
    Fewsums,
    Smallbin,
    Largebin,
    Auto,
}

impl Alg {
    fn name(self) -> &'static str {
        match self {
            Alg::Brute => "brute",
            Alg::Dp => "dp",
            Alg::Mim => "mim",
            Alg::Ss => "ss",
            Alg::Sampler => "sampler",
            Alg::Repr => "repr",
            Alg::Fewsums => "fewsums",
            Alg::Smallbin => "smallbin",
            Alg::Largebin => "largebin",
            Alg::Auto => "auto",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    alg: Alg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    knobs: Knobs,
}

/// Per-algorithm settings; each solver reads only the ones it needs.
#[derive(Args)]
struct Knobs {
    /// Coordinate set for `repr` and `fewsums`: 1-based indices like `1,2,5`, or `auto`.
    #[arg(long = "M", default_value = "auto")]
    m: String,
    /// Sum-richness exponent; measured from `M` when omitted.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Solution-density exponent for the sampler.
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    /// Step budget (sample budget for the sampler).
    #[arg(long)]
    budget: Option<u64>,
    /// Independent passes for `repr` (default n²).
    #[arg(long)]
    passes: Option<usize>,
}

impl Default for Knobs {
    fn default() -> Self {
        Knobs {
            m: "auto".into(),
            gamma: None,
            epsilon: None,
            sigma: 0.0,
            budget: None,
            passes: None,
        }
    }
}

#[derive(Args)]
struct HashArgs {
    input: PathBuf,
    #[arg(long = "B")]
    b: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the reduced instance here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check one instance file instead of the generated corpus.
    input: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "udcp,l2identity,cauchyschwarz,sumsvsbin")]
    checks: Vec<String>,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    alg: Alg,
    #[arg(long, default_value_t = 8)]
    n_min: usize,
    #[arg(long, default_value_t = 20)]
    n_max: usize,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    csv: PathBuf,
}

enum Failure {
    Error(Error),
    Violation(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn emit(v: &Value) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{v}");
}

fn read_instance(path: &Path) -> sslab_core::Result<Instance> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Instance::from_text(&text)
}

fn write_text(path: &Path, text: &str) -> sslab_core::Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn parse_big(s: &str, what: &str) -> sslab_core::Result<BigUint> {
    s.parse::<BigUint>()
        .map_err(|_| Error::Domain(format!("{what} must be a non-negative integer, got {s:?}")))
}

fn cmd_gen(a: &GenArgs) -> CmdResult {
    let mut rng = RandomSource::new(a.seed);
    let target = a.target.as_deref().map(|t| parse_big(t, "--target")).transpose()?;
    let (instance, planted) = match a.kind {
        Kind::Density => (gen::gen_random_density(a.n, a.d, &mut rng)?, None),
        Kind::Geometric => (gen::gen_geometric_pairs(a.n)?, None),
        Kind::Planted => {
            let (i, x) = gen::gen_planted(a.n, a.bits, &mut rng)?;
            (i, Some(x))
        }
        Kind::Equal => {
            let t = target.map_or(Ok((a.n / 2) as u64 * a.value), |t| {
                u64::try_from(t).map_err(|_| Error::Domain("--target too large for equal weights".into()))
            })?;
            (gen::gen_all_equal(a.n, a.value, t)?, None)
        }
        Kind::Superinc => (
            gen::gen_super_increasing(a.n, target.unwrap_or_else(|| BigUint::from(2u8)))?,
            None,
        ),
    };
    match &a.out {
        Some(path) => {
            write_text(path, &instance.to_text())?;
            let mut v = json!({
                "command": "gen",
                "n": instance.n(),
                "out": path.display().to_string(),
                "seed": a.seed,
                "target": instance.target().to_string(),
            });
            if let Some(x) = planted {
                v["planted_mask_hex"] = json!(x.to_hex());
            }
            emit(&v);
            eprintln!("wrote {} items to {}", instance.n(), path.display());
        }
        None => print!("{}", instance.to_text()),
    }
    Ok(())
}

fn cmd_analyze(a: &AnalyzeArgs) -> CmdResult {
    let instance = read_instance(&a.input)?;
    let n = instance.n();
    let hist = enumerate_histogram(&instance, Subset::full(n))?;
    let (mode, beta) = hist.mode();
    let v = json!({
        "command": "analyze",
        "n": n,
        "density": instance.density().ok(),
        "target_bits": instance.target().bits(),
        "distinct_sums": hist.support(),
        "beta": beta,
        "modal_sum": mode.to_string(),
        "l2_squared": hist.l2_squared().to_string(),
    });
    emit(&v);
    eprintln!("n={n} distinct={} beta={beta}", hist.support());
    Ok(())
}

fn cmd_classify(a: &ClassifyArgs) -> CmdResult {
    let instance = read_instance(&a.input)?;
    let report = classify(&instance, a.oracle_limit, a.epsilon)?;
    let mut v = serde_json::to_value(&report).expect("report serializes");
    v["command"] = json!("classify");
    emit(&v);
    eprintln!("regime: {}", report.regime);
    Ok(())
}

fn parse_m(spec: &str, n: usize) -> sslab_core::Result<Option<Subset>> {
    if spec == "auto" {
        return Ok(None);
    }
    let mut idx = Vec::new();
    for tok in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let k: usize = tok
            .parse()
            .map_err(|_| Error::Domain(format!("bad index {tok:?} in --M")))?;
        if k == 0 || k > n {
            return Err(Error::Domain(format!("index {k} in --M outside 1..={n}")));
        }
        idx.push(k - 1);
    }
    Ok(Some(Subset::from_indices(idx)))
}

/// First or second half of `[n]` (each of size `⌊n/2⌋`), whichever has more
/// distinct sums when `richer`, fewer otherwise.
fn auto_m(instance: &Instance, richer: bool) -> sslab_core::Result<Subset> {
    let n = instance.n();
    let half = n / 2;
    let s = Subset::from_indices(0..half);
    let t = Subset::from_indices(n - half..n);
    let (ds, dt) = (distinct_sums(instance, s)?, distinct_sums(instance, t)?);
    Ok(if (dt > ds) == richer && dt != ds { t } else { s })
}

fn measured_gamma(instance: &Instance, m: Subset) -> sslab_core::Result<f64> {
    if m.is_empty() {
        return Ok(0.0);
    }
    Ok(((distinct_sums(instance, m)? as f64).log2() / m.len() as f64).clamp(0.0, 1.0))
}

fn run_alg(
    alg: Alg,
    instance: &Instance,
    k: &Knobs,
    rng: &mut RandomSource,
) -> sslab_core::Result<SolverOutcome> {
    let n = instance.n();
    Ok(match alg {
        Alg::Brute => brute_solve(instance)?,
        Alg::Dp => bellman_dp(instance)?,
        Alg::Mim => meet_in_middle(instance)?,
        Alg::Ss => schroeppel_shamir(instance)?,
        Alg::Sampler => {
            let budget = k.budget.unwrap_or_else(|| 1u64 << ((n as u32).div_ceil(2) + 4).min(40));
            modular_sampler(instance, k.sigma, rng, budget)?
        }
        Alg::Repr => {
            let m = match parse_m(&k.m, n)? {
                Some(m) => m,
                None => auto_m(instance, true)?,
            };
            let gamma = match k.gamma {
                Some(g) => g,
                None => measured_gamma(instance, m)?,
            };
            solve_many_sums_amplified(instance, m, gamma, rng, k.passes, k.budget)?
        }
        Alg::Fewsums => {
            let m = match parse_m(&k.m, n)? {
                Some(m) => m,
                None => auto_m(instance, false)?,
            };
            let gamma = match k.gamma {
                Some(g) => g,
                None => measured_gamma(instance, m)?,
            };
            solve_few_sums(instance, m, gamma)?
        }
        Alg::Smallbin => solve_small_bin(instance, k.epsilon.unwrap_or(0.125), rng, k.budget)?,
        Alg::Largebin => solve_large_bin(instance)?,
        Alg::Auto => solve_auto(instance, rng, k.budget, k.epsilon)?,
    })
}

fn outcome_json(alg: Alg, instance: &Instance, out: &SolverOutcome) -> Value {
    // Solvers only hand out verified witnesses; check once more at the boundary.
    let witness = out.witness.filter(|&x| instance.verify(x));
    assert_eq!(witness, out.witness, "solver returned an unverified witness");
    let mut v = json!({
        "command": "solve",
        "alg": alg.name(),
        "found": witness.is_some(),
        "witness_mask_hex": witness.map(|x| x.to_hex()),
        "witness": witness.map(|x| x.indices().map(|i| i + 1).collect::<Vec<_>>()),
        "step_counters": out.cost,
        "branch_taken": out.branch.as_deref().unwrap_or(alg.name()),
        "budget_exhausted": out.budget_exhausted,
    });
    if !out.iterations.is_empty() {
        v["iterations"] = serde_json::to_value(&out.iterations).expect("records serialize");
    }
    v
}

fn cmd_solve(a: &SolveArgs) -> CmdResult {
    let instance = read_instance(&a.input)?;
    let mut rng = RandomSource::new(a.seed);
    let out = run_alg(a.alg, &instance, &a.knobs, &mut rng)?;
    emit(&outcome_json(a.alg, &instance, &out));
    match out.witness {
        Some(x) => eprintln!("{}: found {x}", a.alg.name()),
        None => eprintln!("{}: no solution found", a.alg.name()),
    }
    Ok(())
}

fn cmd_hash(a: &HashArgs) -> CmdResult {
    let instance = read_instance(&a.input)?;
    let b = parse_big(&a.b, "--B")?;
    let mut rng = RandomSource::new(a.seed);
    let rec = reduce_bitlength(&instance, &b, &mut rng)?;
    if let Some(path) = &a.out {
        write_text(path, &rec.reduced.to_text())?;
    }
    emit(&json!({
        "command": "hash",
        "p": rec.prime().to_string(),
        "r": rec.shift(),
        "rounds": rec.rounds.len(),
        "history": rec.rounds,
        "B": b.to_string(),
        "reduced_bits": reduced_bits(&rec),
        "reduced_target": rec.reduced.target().to_string(),
    }));
    eprintln!("p={} r={} rounds={}", rec.prime(), rec.shift(), rec.rounds.len());
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    let checks = a
        .checks
        .iter()
        .map(|c| c.parse::<Check>())
        .collect::<sslab_core::Result<Vec<_>>>()?;
    let entries: Vec<(String, Instance)> = match &a.input {
        Some(path) => vec![(path.display().to_string(), read_instance(path)?)],
        None => corpus(a.n_max, a.seed)?
            .into_iter()
            .map(|e| (e.label, e.instance))
            .collect(),
    };
    let (mut run, mut failed) = (0usize, 0usize);
    for check in checks {
        for (label, instance) in &entries {
            if a.input.is_none() && instance.n() > check.max_n() {
                continue;
            }
            let r = run_check(check, label, instance)?;
            run += 1;
            if !r.passed {
                failed += 1;
            }
            emit(&serde_json::to_value(&r).expect("result serializes"));
        }
    }
    eprintln!("{run} checks, {failed} violations");
    if failed > 0 {
        return Err(Failure::Violation(failed));
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs) -> CmdResult {
    let mut rng = RandomSource::new(a.seed);
    let mut csv = String::from(
        "n,rep,found,sums_enumerated,pairs_checked,dict_lookups,samples_drawn,peak_retained,steps\n",
    );
    let mut total = CostCounters::default();
    for n in a.n_min..=a.n_max {
        for rep in 0..a.reps {
            let (instance, _) = gen::gen_planted(n, n.max(2) as u32, &mut rng)?;
            let mut stream = rng.split();
            let out = run_alg(a.alg, &instance, &Knobs::default(), &mut stream)?;
            let c = &out.cost;
            csv.push_str(&format!(
                "{n},{rep},{},{},{},{},{},{},{}\n",
                out.found(),
                c.sums_enumerated,
                c.pairs_checked,
                c.dict_lookups,
                c.samples_drawn,
                c.peak_retained,
                c.steps
            ));
            total.absorb(c);
        }
    }
    write_text(&a.csv, &csv)?;
    emit(&json!({
        "command": "bench",
        "alg": a.alg.name(),
        "n_min": a.n_min,
        "n_max": a.n_max,
        "reps": a.reps,
        "csv": a.csv.display().to_string(),
        "total": total,
    }));
    eprintln!("wrote {}", a.csv.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Hash(a) => cmd_hash(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(k)) => {
            eprintln!("{k} invariant violations");
            ExitCode::from(3)
        }
    }
}
