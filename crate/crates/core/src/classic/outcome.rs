use serde::Serialize;

use crate::instance::{Instance, Subset};

/// Exact work counters. Every solver reports them, found or not.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CostCounters {
    pub sums_enumerated: u64,
    pub pairs_checked: u64,
    pub dict_lookups: u64,
    pub samples_drawn: u64,
    /// Largest number of sums held in memory at once, where tracked.
    pub peak_retained: u64,
    /// Budgeted work units; see the individual solvers.
    pub steps: u64,
}

impl CostCounters {
    pub fn absorb(&mut self, other: &CostCounters) {
        self.sums_enumerated += other.sums_enumerated;
        self.pairs_checked += other.pairs_checked;
        self.dict_lookups += other.dict_lookups;
        self.samples_drawn += other.samples_drawn;
        self.peak_retained = self.peak_retained.max(other.peak_retained);
        self.steps += other.steps;
    }
}

/// One `(target, s, s₁)` iteration of the representation-technique solver.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationRecord {
    pub complemented: bool,
    pub s: usize,
    pub s1: usize,
    pub s2: usize,
    pub prime: u64,
    pub t_l: u64,
    pub left_len: u64,
    pub right_len: u64,
    pub pairs_scanned: u64,
    /// Search-space sizes `2^|L|·C(|M|,s₁)` and `2^|R|·C(|M|,s₂)`.
    pub left_space: f64,
    pub right_space: f64,
    /// Set when the predicted list size exceeded capacity.
    pub skipped: bool,
}

/// The result of one solver run. A witness is only ever present after exact
/// re-summation against the instance it answers.
#[derive(Clone, Debug, Serialize)]
pub struct SolverOutcome {
    pub witness: Option<Subset>,
    pub verified: bool,
    pub cost: CostCounters,
    pub branch: Option<String>,
    pub budget_exhausted: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub iterations: Vec<IterationRecord>,
}

impl SolverOutcome {
    /// Keeps `candidate` only if `w(candidate) = t` holds exactly.
    pub fn from_candidate(instance: &Instance, candidate: Option<Subset>, cost: CostCounters) -> Self {
        let witness = candidate.filter(|&x| instance.verify(x));
        SolverOutcome {
            verified: witness.is_some(),
            witness,
            cost,
            branch: None,
            budget_exhausted: false,
            iterations: Vec::new(),
        }
    }

    pub fn none(cost: CostCounters) -> Self {
        SolverOutcome {
            witness: None,
            verified: false,
            cost,
            branch: None,
            budget_exhausted: false,
            iterations: Vec::new(),
        }
    }

    pub fn found(&self) -> bool {
        self.witness.is_some()
    }

    pub fn with_branch(mut self, branch: impl Into<String>) -> Self {
        self.branch = Some(branch.into());
        self
    }

    /// Re-checks the witness against `instance` (used when the solver ran on a
    /// transformed instance).
    pub fn reverify(mut self, instance: &Instance) -> Self {
        if let Some(x) = self.witness {
            if !instance.verify(x) {
                self.witness = None;
                self.verified = false;
            }
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unverifiable_candidates_are_dropped() {
        let i = Instance::from_u64(&[3, 5], 8).unwrap();
        let ok = SolverOutcome::from_candidate(&i, Some(Subset(0b11)), CostCounters::default());
        assert!(ok.found() && ok.verified);
        let bad = SolverOutcome::from_candidate(&i, Some(Subset(0b01)), CostCounters::default());
        assert!(!bad.found() && !bad.verified);
        let other = Instance::from_u64(&[3, 5], 3).unwrap();
        assert!(!ok.reverify(&other).found());
    }
}
