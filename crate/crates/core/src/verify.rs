//! Seeded instance corpora and the invariant checks run over them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::combinatorics::{
    cauchy_schwarz, cauchy_schwarz_all_equipartitions, check_udcp, l2_identity, sums_vs_bin,
    udcp_from_instance, EQUIPARTITION_LIMIT, TERNARY_LIMIT,
};
use crate::error::{Error, Result};
use crate::gen;
use crate::instance::{Instance, Subset};
use crate::limits::ENUMERATION_LIMIT;
use crate::oracle;
use crate::rng::RandomSource;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Udcp,
    L2Identity,
    CauchySchwarz,
    SumsVsBin,
}

impl Check {
    pub const ALL: [Check; 4] = [Check::Udcp, Check::L2Identity, Check::CauchySchwarz, Check::SumsVsBin];

    pub fn name(self) -> &'static str {
        match self {
            Check::Udcp => "udcp",
            Check::L2Identity => "l2identity",
            Check::CauchySchwarz => "cauchyschwarz",
            Check::SumsVsBin => "sumsvsbin",
        }
    }

    /// Widest instance the check can evaluate exactly.
    pub fn max_n(self) -> usize {
        match self {
            Check::L2Identity => TERNARY_LIMIT,
            _ => ENUMERATION_LIMIT.min(24),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown check {s:?}")))
    }
}

/// A labelled corpus member.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub label: String,
    pub instance: Instance,
}

/// For every `n` in `[2, n_max]`: two random instances at each density in
/// `{1, 2}`, one planted instance, an all-equal and a super-increasing
/// instance, and geometric pairs for even `n`.
pub fn corpus(n_max: usize, seed: u64) -> Result<Vec<CorpusEntry>> {
    let mut rng = RandomSource::new(seed);
    let mut out = Vec::new();
    let mut push = |label: String, instance: Instance| out.push(CorpusEntry { label, instance });
    for n in 2..=n_max {
        for d in [1.0, 2.0] {
            for k in 0..2 {
                push(format!("density{d}-n{n}-{k}"), gen::gen_random_density(n, d, &mut rng)?);
            }
        }
        let (planted, _) = gen::gen_planted(n, (n as u32).max(2), &mut rng)?;
        push(format!("planted-n{n}"), planted);
        push(format!("equal-n{n}"), gen::gen_all_equal(n, 1, (n / 2) as u64)?);
        push(format!("superinc-n{n}"), gen::gen_super_increasing(n, BigUint::from(2u8))?);
        if n % 2 == 0 {
            push(format!("geometric-n{n}"), gen::gen_geometric_pairs(n)?);
        }
    }
    Ok(out)
}

/// Outcome of one check on one instance.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check: Check,
    pub label: String,
    pub n: usize,
    pub passed: bool,
    pub detail: String,
}

/// Runs `check` on `instance`. Capacity errors propagate; a failed
/// invariant is reported with `passed = false`.
pub fn run_check(check: Check, label: &str, instance: &Instance) -> Result<CheckResult> {
    let n = instance.n();
    let (passed, detail) = match check {
        Check::Udcp => {
            let pair = udcp_from_instance(instance, check.max_n())?;
            let distinct = oracle::distinct_sums(instance, Subset::full(n))?;
            let beta = oracle::max_bin(instance)? as usize;
            let sizes = pair.a.len() == distinct && pair.b.len() == beta;
            let ok = check_udcp(&pair)?;
            (sizes && ok, format!("|A|={} |B|={} decodable={ok}", pair.a.len(), pair.b.len()))
        }
        Check::L2Identity => {
            let id = l2_identity(instance)?;
            (id.holds(), format!("l2={} decomposition={}", id.l2_squared, id.decomposition))
        }
        Check::CauchySchwarz => {
            if n <= EQUIPARTITION_LIMIT {
                let (checked, violation) = cauchy_schwarz_all_equipartitions(instance)?;
                match violation {
                    None => (true, format!("{checked} equipartitions")),
                    Some(c) => (false, format!("violated at S={}", c.s)),
                }
            } else {
                let c = cauchy_schwarz(instance, Subset::from_indices(0..n / 2))?;
                (c.holds(), format!("beta={} l2_s={} l2_t={}", c.beta, c.l2_s, c.l2_t))
            }
        }
        Check::SumsVsBin => {
            let (many, held) = sums_vs_bin(instance)?;
            (held, format!("many_sums={many}"))
        }
    };
    Ok(CheckResult {
        check,
        label: label.to_string(),
        n,
        passed,
        detail,
    })
}
