//! Solvers that exploit a coordinate set `M` by how many sums it generates.
//!
//! [`solve_many_sums`] combines the representation technique on `M` with
//! meet-in-the-middle on the remaining items; [`solve_few_sums`] is an exact
//! sum-set join when `M` is sum-poor.

mod few;
mod filtered;
mod many;
mod params;

pub use few::{few_sums_left_size, solve_few_sums};
pub use filtered::{build_filtered_list, FilteredList, Side};
pub use many::{
    default_step_budget, predicted_pass_steps, solve_many_sums, solve_many_sums_amplified,
    solve_many_sums_with, BUDGET_FACTOR,
};
pub use params::{derive_params, ReprParams};
