use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Instance, Subset};
use crate::limits;
use crate::sumset::{combinations, sorted_subset_sums};
use crate::with_words;
use crate::word::SumWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// `{S ⊆ side ∪ M : w(S) ≡ residue (mod p), |S ∩ M| = s_i}`.
#[derive(Clone, Debug, Serialize)]
pub struct FilteredList {
    pub side: Side,
    pub side_set: Subset,
    pub m: Subset,
    pub s_i: usize,
    pub p: u64,
    pub residue: u64,
    /// Sorted by mask.
    pub entries: Vec<(Subset, BigUint)>,
    /// Subsets enumerated on the way: `2^|L₁| + 2^|L₂|·C(|M|, s_i)`.
    pub enumerated: u64,
}

pub(crate) struct ListWork<W> {
    /// `(sum, mask)`, in generation order.
    pub entries: Vec<(W, u64)>,
    pub enumerated: u64,
    pub lookups: u64,
}

fn sum_of_mask<W: SumWord>(weights: &[W], mask: u64) -> W {
    Subset(mask).indices().fold(W::zero(), |acc, i| acc.add(&weights[i]))
}

/// The half-split join: `2^{L₁}` goes into a residue-keyed table, and every
/// `Y ∪ Z` with `Y ⊆ side ∖ L₁`, `Z ∈ C(M, s_i)` looks up its complement class.
#[allow(clippy::too_many_arguments)]
pub(crate) fn build_core<W: SumWord>(
    weights: &[W],
    side_items: &[usize],
    m_items: &[usize],
    s_i: usize,
    p: u64,
    residue: u64,
    split: usize,
) -> Result<ListWork<W>> {
    let split = split.min(side_items.len());
    let (l1, l2) = side_items.split_at(split);
    let mut table: Vec<(u64, u64, W)> = sorted_subset_sums(weights, l1)?
        .into_iter()
        .map(|(s, m)| (s.residue(p), m, s))
        .collect();
    table.sort_unstable_by_key(|e| (e.0, e.1));
    let ys = sorted_subset_sums(weights, l2)?;
    let zs = combinations(m_items, s_i);
    let mut enumerated = table.len() as u64;
    let mut lookups = 0u64;
    let mut entries = Vec::new();
    for &z in &zs {
        let wz = sum_of_mask(weights, z);
        for (wy, y) in &ys {
            let x = wz.add(wy);
            enumerated += 1;
            lookups += 1;
            let need = (residue + p - x.residue(p)) % p;
            let lo = table.partition_point(|e| e.0 < need);
            for (_, m1, w1) in table[lo..].iter().take_while(|e| e.0 == need) {
                entries.push((x.add(w1), m1 | y | z));
            }
        }
        limits::check_table("filtered list", entries.len() as u128, 16 + std::mem::size_of::<W>() as u128)?;
    }
    Ok(ListWork {
        entries,
        enumerated,
        lookups,
    })
}

/// Builds one side's filtered list exactly. `split` is `|L₁|`, the number of
/// side items enumerated directly (clamped to the side).
#[allow(clippy::too_many_arguments)]
pub fn build_filtered_list(
    instance: &Instance,
    side: Side,
    side_set: Subset,
    m: Subset,
    s_i: usize,
    p: u64,
    residue: u64,
    split: usize,
) -> Result<FilteredList> {
    let n = instance.n();
    if !side_set.is_disjoint(m) || !side_set.union(m).fits(n) {
        return Err(Error::Contract(format!(
            "side {side_set} and M = {m} must be disjoint subsets of [n]"
        )));
    }
    if p == 0 || residue >= p {
        return Err(Error::Contract(format!("residue {residue} outside [0, {p})")));
    }
    let side_items: Vec<usize> = side_set.indices().collect();
    let m_items: Vec<usize> = m.indices().collect();
    let work = with_words!(instance, |w, _t| {
        build_core(w, &side_items, &m_items, s_i, p, residue, split).map(|lw| {
            let mut entries: Vec<(Subset, BigUint)> = lw
                .entries
                .into_iter()
                .map(|(s, mask)| (Subset(mask), s.to_biguint()))
                .collect();
            entries.sort_unstable_by_key(|e| e.0);
            (entries, lw.enumerated)
        })
    })?;
    Ok(FilteredList {
        side,
        side_set,
        m,
        s_i,
        p,
        residue,
        entries: work.0,
        enumerated: work.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{gen, RandomSource};

    #[test]
    fn combinations_count() {
        let items = [1, 3, 4, 6, 9];
        for k in 0..=5 {
            let c = combinations(&items, k);
            assert_eq!(c.len() as u128, crate::numeric::binomial(5, k as u64));
            assert!(c.iter().all(|m| m.count_ones() as usize == k));
        }
        assert!(combinations(&items, 6).is_empty());
    }

    #[test]
    fn matches_brute_filter() {
        let mut rng = RandomSource::new(17);
        for round in 0..20 {
            let i = gen::gen_random_density(12, 1.0, &mut rng).unwrap();
            let m = Subset::from_indices([0, 2, 4, 6]);
            let side = Subset::from_indices([1, 3, 5, 7, 9]);
            let p = [3u64, 7, 11, 13, 31][round % 5];
            let residue = rng.below(p);
            let s_i = round % 5;
            let list = build_filtered_list(&i, Side::Left, side, m, s_i, p, residue, round % 6).unwrap();
            let universe = side.union(m);
            let mut expect = Vec::new();
            for mask in 0u64..1 << 12 {
                let x = Subset(mask);
                if x.difference(universe).is_empty()
                    && x.intersection(m).len() == s_i
                    && &i.sum_of(x) % p == BigUint::from(residue)
                {
                    expect.push((x, i.sum_of(x)));
                }
            }
            assert_eq!(list.entries, expect);
        }
    }

    #[test]
    fn rejects_overlap() {
        let i = Instance::from_u64(&[1, 2, 3, 4], 5).unwrap();
        let r = build_filtered_list(&i, Side::Left, Subset(0b11), Subset(0b10), 1, 5, 0, 1);
        assert!(matches!(r, Err(Error::Contract(_))));
    }
}
