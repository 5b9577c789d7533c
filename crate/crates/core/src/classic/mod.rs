//! Baseline exact solvers and the residue-class sampler.

mod dp;
mod mim;
mod outcome;
mod sampler;
mod ss;

pub use dp::bellman_dp;
pub use mim::{meet_in_middle, meet_in_middle_with};
pub use outcome::{CostCounters, IterationRecord, SolverOutcome};
pub use sampler::{modular_sampler, sampler_modulus_bound, ResidueSampler};
pub use ss::schroeppel_shamir;
