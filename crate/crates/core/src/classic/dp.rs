use num_traits::ToPrimitive;

use crate::classic::{CostCounters, SolverOutcome};
use crate::error::{Error, Result};
use crate::instance::{Instance, Subset};
use crate::limits;

const UNREACHED: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

/// Reachable-sums table over `[0, t]`. Each cell remembers the item that first
/// reached it, which gives the witness by walking back from `t`.
pub fn bellman_dp(instance: &Instance) -> Result<SolverOutcome> {
    limits::check_items(instance.n())?;
    let t = instance
        .target()
        .to_u64()
        .filter(|&t| t < usize::MAX as u64 / 8)
        .ok_or_else(|| Error::capacity("dp table width", u128::MAX, u64::MAX as u128))?;
    limits::check_table("dp table", t as u128 + 1, 4)?;
    let t = t as usize;
    let mut reach = vec![UNREACHED; t + 1];
    reach[0] = ROOT;
    let mut cost = CostCounters::default();
    for (i, w) in instance.weights().iter().enumerate() {
        let Some(w) = w.to_usize().filter(|&w| w >= 1 && w <= t) else {
            continue;
        };
        cost.sums_enumerated += (t + 1 - w) as u64;
        // Descending so reach[s - w] still reflects items before i.
        for s in (w..=t).rev() {
            if reach[s] == UNREACHED && reach[s - w] != UNREACHED {
                reach[s] = i as u32;
            }
        }
        if reach[t] != UNREACHED {
            break;
        }
    }
    if reach[t] == UNREACHED {
        return Ok(SolverOutcome::none(cost));
    }
    let mut mask = 0u64;
    let mut s = t;
    while reach[s] != ROOT {
        let i = reach[s] as usize;
        mask |= 1 << i;
        s -= instance.weights()[i].to_usize().unwrap();
    }
    Ok(SolverOutcome::from_candidate(instance, Some(Subset(mask)), cost))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let i = Instance::from_u64(&[3, 5, 8], 11).unwrap();
        assert_eq!(bellman_dp(&i).unwrap().witness, Some(Subset::from_indices([0, 2])));
        let none = Instance::from_u64(&[3, 5, 8], 2).unwrap();
        assert!(!bellman_dp(&none).unwrap().found());
        let g = Instance::from_u64(&[1, 1, 3, 3], 4).unwrap();
        let out = bellman_dp(&g).unwrap();
        assert!(out.verified && g.verify(out.witness.unwrap()));
        let zero = Instance::from_u64(&[4], 0).unwrap();
        assert_eq!(bellman_dp(&zero).unwrap().witness, Some(Subset::EMPTY));
    }

    #[test]
    fn cell_count_is_bounded() {
        let i = Instance::from_u64(&[2, 9, 4, 7, 1], 30).unwrap();
        let out = bellman_dp(&i).unwrap();
        assert!(out.cost.sums_enumerated <= 5 * 31);
    }

    #[test]
    fn oversized_target_is_a_capacity_error() {
        let i = Instance::new(
            vec![num_bigint::BigUint::from(1u8)],
            crate::instance::pow2(80),
        )
        .unwrap();
        assert!(matches!(bellman_dp(&i), Err(Error::Capacity { .. })));
    }
}
