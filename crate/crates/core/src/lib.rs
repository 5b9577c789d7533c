//! Exact Subset Sum solvers parameterized by the structure of the instance.
//!
//! The crate pairs every fast solver with a brute-force oracle:
//!
//! - [`oracle`]: exhaustive sum histograms, maximum bin size `β(w)`, distinct
//!   sums `|w(2^S)|`, and a reference solver.
//! - [`classic`]: table DP, meet-in-the-middle, Schroeppel–Shamir, and a
//!   residue-class sampler.
//! - [`hashing`]: modular bit-length reduction with its property checker.
//! - [`structured`]: the representation-technique solver for sum-rich
//!   coordinate sets and the join solver for sum-poor ones.
//! - [`dispatch`]: small-bin and large-bin drivers and the density-reduction
//!   pipeline.
//! - [`combinatorics`]: uniquely decodable code pairs, bin `ℓ²` norms, and
//!   ternary zero-sum counts.
//!
//! Hot loops run on rayon when the `parallel` feature is enabled; see [`Exec`].

pub mod classic;
pub mod combinatorics;
pub mod dispatch;
pub mod error;
pub mod exec;
pub mod gen;
pub mod hashing;
pub mod instance;
pub mod limits;
pub mod numeric;
pub mod oracle;
pub mod rng;
pub mod structured;
pub mod sumset;
pub mod verify;
pub mod word;

pub use classic::{CostCounters, SolverOutcome};
pub use error::{Error, Result};
pub use exec::Exec;
pub use instance::{Instance, Subset};
pub use rng::RandomSource;
