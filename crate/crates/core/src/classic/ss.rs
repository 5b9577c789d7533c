use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::classic::{CostCounters, SolverOutcome};
use crate::error::Result;
use crate::instance::{Instance, Subset};
use crate::limits;
use crate::sumset::{sorted_subset_sums, SumSet};
use crate::with_words;
use crate::word::SumWord;

/// Pairwise sums `a + b` of two sorted lists, produced in sorted order with a
/// heap holding one cursor per entry of `a`.
struct PairStream<'a, W> {
    a: &'a [(W, u64)],
    b: &'a [(W, u64)],
    ascending: bool,
    up: BinaryHeap<Reverse<(W, usize, usize)>>,
    down: BinaryHeap<(W, usize, usize)>,
    last: Option<W>,
    produced: u64,
    peak_heap: usize,
}

impl<'a, W: SumWord> PairStream<'a, W> {
    fn new(a: &'a [(W, u64)], b: &'a [(W, u64)], ascending: bool) -> Self {
        let mut s = PairStream {
            a,
            b,
            ascending,
            up: BinaryHeap::new(),
            down: BinaryHeap::new(),
            last: None,
            produced: 0,
            peak_heap: 0,
        };
        if !b.is_empty() {
            for (i, ai) in a.iter().enumerate() {
                if ascending {
                    s.up.push(Reverse((ai.0.add(&b[0].0), i, 0)));
                } else {
                    let j = b.len() - 1;
                    s.down.push((ai.0.add(&b[j].0), i, j));
                }
            }
        }
        s.peak_heap = a.len();
        s
    }

    fn pop(&mut self) -> Option<(W, u64)> {
        let (sum, i, j) = if self.ascending {
            let Reverse(top) = self.up.pop()?;
            if top.2 + 1 < self.b.len() {
                let j = top.2 + 1;
                self.up.push(Reverse((self.a[top.1].0.add(&self.b[j].0), top.1, j)));
            }
            top
        } else {
            let top = self.down.pop()?;
            if top.2 > 0 {
                let j = top.2 - 1;
                self.down.push((self.a[top.1].0.add(&self.b[j].0), top.1, j));
            }
            top
        };
        if let Some(prev) = &self.last {
            assert!(
                if self.ascending { *prev <= sum } else { *prev >= sum },
                "pair stream out of order"
            );
        }
        self.last = Some(sum.clone());
        self.produced += 1;
        Some((sum, self.a[i].1 | self.b[j].1))
    }

    fn peek_sum(&self) -> Option<&W> {
        if self.ascending {
            self.up.peek().map(|Reverse(t)| &t.0)
        } else {
            self.down.peek().map(|t| &t.0)
        }
    }

    /// Next distinct sum with the smallest mask among the pairs attaining it.
    fn next_group(&mut self) -> Option<(W, u64)> {
        let (sum, mut mask) = self.pop()?;
        while self.peek_sum() == Some(&sum) {
            let (_, m) = self.pop().unwrap();
            mask = mask.min(m);
        }
        Some((sum, mask))
    }
}

fn quarter_bounds(n: usize) -> [std::ops::Range<usize>; 4] {
    let base = n / 4;
    let extra = n % 4;
    let mut start = 0;
    let mut out: [std::ops::Range<usize>; 4] = Default::default();
    for (q, r) in out.iter_mut().enumerate() {
        let len = base + usize::from(q < extra);
        *r = start..start + len;
        start += len;
    }
    out
}

/// Schroeppel–Shamir: the two half-sum lists are streamed in sorted order from
/// four quarter lists, so only `O(2^{n/4})` sums are held at once.
pub fn schroeppel_shamir(instance: &Instance) -> Result<SolverOutcome> {
    limits::check_items(instance.n())?;
    let n = instance.n();
    let quarters = quarter_bounds(n);
    let items: Vec<Vec<usize>> = quarters.iter().map(|r| r.clone().collect()).collect();
    let (witness, cost) = with_words!(instance, |w, t| ss_core(w, t, &items))?;
    Ok(SolverOutcome::from_candidate(instance, witness.map(Subset), cost))
}

fn ss_core<W: SumWord>(weights: &[W], target: &W, quarters: &[Vec<usize>]) -> Result<(Option<u64>, CostCounters)> {
    let lists = quarters
        .iter()
        .map(|q| Ok(SumSet::from_sorted(sorted_subset_sums(weights, q)?)))
        .collect::<Result<Vec<_>>>()?;
    let enumerated: u64 = quarters.iter().map(|q| 1u64 << q.len()).sum();
    let held: usize = lists.iter().map(|l| l.len()).sum();

    // The heap runs over the shorter list of each pair.
    let order = |x: usize, y: usize| {
        if lists[x].len() <= lists[y].len() {
            (x, y)
        } else {
            (y, x)
        }
    };
    let (la, lb) = order(0, 1);
    let (ra, rb) = order(2, 3);
    let mut left = PairStream::new(lists[la].entries(), lists[lb].entries(), true);
    let mut right = PairStream::new(lists[ra].entries(), lists[rb].entries(), false);

    let mut best: Option<u64> = None;
    let mut checked = 0u64;
    let mut l = left.next_group();
    let mut r = right.next_group();
    while let (Some((ls, lm)), Some((rs, rm))) = (&l, &r) {
        checked += 1;
        match ls.add(rs).cmp(target) {
            std::cmp::Ordering::Less => l = left.next_group(),
            std::cmp::Ordering::Greater => r = right.next_group(),
            std::cmp::Ordering::Equal => {
                let cand = lm | rm;
                best = Some(best.map_or(cand, |b| b.min(cand)));
                l = left.next_group();
                r = right.next_group();
            }
        }
    }
    let cost = CostCounters {
        sums_enumerated: enumerated + left.produced + right.produced,
        pairs_checked: checked,
        peak_retained: (held + left.peak_heap + right.peak_heap) as u64,
        steps: enumerated + left.produced + right.produced,
        ..CostCounters::default()
    };
    Ok((best, cost))
}
