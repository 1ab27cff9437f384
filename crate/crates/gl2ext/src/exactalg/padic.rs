//! p-adic valuations of rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::Rat;

/// A rational together with the prime at which it is valued.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicRat {
    pub value: Rat,
    pub prime: u64,
}

impl PadicRat {
    pub fn new(value: Rat, prime: u64) -> Self {
        PadicRat { value, prime }
    }

    /// `None` stands for `+∞` (the valuation of zero).
    pub fn vp(&self) -> Option<i64> {
        vp_rat(&self.value, self.prime)
    }
}

/// Valuation of a nonzero integer; `None` for zero.
pub fn vp_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(k);
        }
        n = q;
        k += 1;
    }
}

pub fn vp_rat(x: &Rat, p: u64) -> Option<i64> {
    let a = vp_int(x.numer(), p)?;
    let b = vp_int(x.denom(), p).expect("denominator is nonzero");
    Some(a - b)
}

/// Valuation written for display: an integer or `inf`.
pub fn show_vp(v: Option<i64>) -> String {
    v.map(|k| k.to_string()).unwrap_or_else(|| "inf".into())
}
