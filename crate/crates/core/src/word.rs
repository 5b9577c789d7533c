//! Fixed-width and arbitrary-precision sum arithmetic behind one trait.
//!
//! Solvers are written once against [`SumWord`]. An [`Instance`] hands out
//! `u128` words when every subset sum fits, and `BigUint` otherwise.
//!
//! [`Instance`]: crate::Instance

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

pub trait SumWord: Clone + Ord + Eq + Hash + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn checked_sub(&self, other: &Self) -> Option<Self>;
    /// `self mod m` for a nonzero modulus.
    fn residue(&self, m: u64) -> u64;
    fn to_biguint(&self) -> BigUint;
}

impl SumWord for u128 {
    fn zero() -> Self {
        0
    }
    #[inline]
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    #[inline]
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        u128::checked_sub(*self, *other)
    }
    #[inline]
    fn residue(&self, m: u64) -> u64 {
        (self % m as u128) as u64
    }
    fn to_biguint(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl SumWord for BigUint {
    fn zero() -> Self {
        <BigUint as Zero>::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        (self >= other).then(|| self - other)
    }
    fn residue(&self, m: u64) -> u64 {
        (self % m).to_u64().expect("residue below a u64 modulus")
    }
    fn to_biguint(&self) -> BigUint {
        self.clone()
    }
}

/// Weights and target in the narrowest representation that holds every subset sum.
#[derive(Clone, Debug)]
pub enum Words {
    Narrow(Vec<u128>, u128),
    Wide(Vec<BigUint>, BigUint),
}

/// Runs `$body` with `$w: &[W]` and `$t: &W` bound for whichever word width the
/// instance needs. `$body` is compiled once per width.
#[macro_export]
macro_rules! with_words {
    ($instance:expr, |$w:ident, $t:ident| $body:expr) => {
        match $instance.words() {
            $crate::word::Words::Narrow(ws, ts) => {
                let $w: &[u128] = &ws;
                let $t: &u128 = &ts;
                $body
            }
            $crate::word::Words::Wide(ws, ts) => {
                let $w: &[num_bigint::BigUint] = &ws;
                let $t: &num_bigint::BigUint = &ts;
                $body
            }
        }
    };
}

pub(crate) fn big_to_u128(x: &BigUint) -> Option<u128> {
    x.to_u128()
}

/// `log2(x)` for a positive big integer, accurate to double precision.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap() as f64;
    top.log2() + shift as f64
}
