//! The Subset Sum instance model, subsets as bitmasks, and the text format.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::limits;
use crate::word::{big_to_u128, log2_big, Words};

/// A set of item indices stored as a bitmask; bit `i` is item `i + 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    /// The full set `{1..n}`.
    pub fn full(n: usize) -> Subset {
        assert!(n <= limits::MAX_ITEMS);
        if n == 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    /// Builds a subset from zero-based indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Subset {
        let mut mask = 0u64;
        for i in indices {
            assert!(i < limits::MAX_ITEMS, "index {i} out of mask range");
            mask |= 1 << i;
        }
        Subset(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    /// Zero-based member indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        })
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    /// Whether every member lies in `{1..n}`.
    pub fn fits(self, n: usize) -> bool {
        n >= 64 || self.0 >> n == 0
    }

    /// Lowercase hex of the mask, `"0"` for the empty set.
    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

/// Weights `w_1..w_n` and a target `t`. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    weights: Vec<BigUint>,
    target: BigUint,
}

impl Instance {
    /// Every weight must be at least 1. Duplicates are kept as distinct items.
    pub fn new(weights: Vec<BigUint>, target: BigUint) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| w.is_zero()) {
            return Err(Error::Domain(format!("weight {} is zero", i + 1)));
        }
        Ok(Instance { weights, target })
    }

    /// Residue instances produced by hashing may contain zero weights.
    pub(crate) fn new_nonnegative(weights: Vec<BigUint>, target: BigUint) -> Self {
        Instance { weights, target }
    }

    pub fn from_u64(weights: &[u64], target: u64) -> Result<Self> {
        Self::new(
            weights.iter().map(|&w| BigUint::from(w)).collect(),
            BigUint::from(target),
        )
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[BigUint] {
        &self.weights
    }

    pub fn target(&self) -> &BigUint {
        &self.target
    }

    /// Same weights, different target.
    pub fn with_target(&self, target: BigUint) -> Instance {
        Instance {
            weights: self.weights.clone(),
            target,
        }
    }

    /// `w([n])`.
    pub fn total(&self) -> BigUint {
        self.weights.iter().sum()
    }

    /// `w(X)`, exact.
    pub fn sum_of(&self, subset: Subset) -> BigUint {
        subset
            .indices()
            .filter(|&i| i < self.n())
            .map(|i| &self.weights[i])
            .sum()
    }

    /// Exact re-summation check: `X ⊆ [n]` and `w(X) = t`.
    pub fn verify(&self, subset: Subset) -> bool {
        subset.fits(self.n()) && self.sum_of(subset) == self.target
    }

    /// `n / log2(t)`.
    pub fn density(&self) -> Result<f64> {
        if self.target < BigUint::from(2u8) {
            return Err(Error::DensityUndefined);
        }
        Ok(self.n() as f64 / log2_big(&self.target))
    }

    /// Narrow `u128` words when the total and the target fit, else big integers.
    pub fn words(&self) -> Words {
        let total = self.total();
        match (big_to_u128(&total), big_to_u128(&self.target)) {
            (Some(_), Some(t)) => Words::Narrow(
                self.weights
                    .iter()
                    .map(|w| big_to_u128(w).unwrap())
                    .collect(),
                t,
            ),
            _ => Words::Wide(self.weights.clone(), self.target.clone()),
        }
    }

    /// Narrow words or a capacity error for routines that only run at 128 bits.
    pub fn narrow_words(&self) -> Result<(Vec<u128>, u128)> {
        match self.words() {
            Words::Narrow(w, t) => Ok((w, t)),
            Words::Wide(..) => Err(Error::capacity(
                "subset sums wider than 128 bits",
                self.total().bits() as u128,
                128,
            )),
        }
    }

    /// Writes the three-line text format.
    pub fn to_text(&self) -> String {
        let ws: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        format!("{}\n{}\n{}\n", self.n(), ws.join(" "), self.target)
    }

    /// Parses the text format: `#` comment lines, then `n`, the weights, and `t`.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut data: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim_start().starts_with('#'))
            .map(|(i, l)| (i + 1, l.trim()))
            .collect();
        while data.last().is_some_and(|(_, l)| l.is_empty()) {
            data.pop();
        }
        if data.len() != 3 {
            return Err(Error::Parse {
                line: data.last().map_or(1, |d| d.0),
                msg: format!("expected 3 data lines, found {}", data.len()),
            });
        }
        let (ln, n_line) = data[0];
        let n: usize = n_line.parse().map_err(|_| Error::Parse {
            line: ln,
            msg: format!("bad item count {n_line:?}"),
        })?;
        let (lw, w_line) = data[1];
        let weights = w_line
            .split_whitespace()
            .map(|tok| parse_decimal(tok, lw))
            .collect::<Result<Vec<_>>>()?;
        if weights.len() != n {
            return Err(Error::Parse {
                line: lw,
                msg: format!("declared {n} weights, found {}", weights.len()),
            });
        }
        let (lt, t_line) = data[2];
        let target = parse_decimal(t_line, lt)?;
        Instance::new(weights, target).map_err(|e| Error::Parse {
            line: lw,
            msg: e.to_string(),
        })
    }
}

fn parse_decimal(tok: &str, line: usize) -> Result<BigUint> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse {
            line,
            msg: format!("not a decimal integer: {tok:?}"),
        });
    }
    BigUint::parse_bytes(tok.as_bytes(), 10).ok_or_else(|| Error::Parse {
        line,
        msg: format!("not a decimal integer: {tok:?}"),
    })
}

/// `2^k` as a big integer.
pub fn pow2(k: u64) -> BigUint {
    BigUint::one() << k
}
