use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::Rational;
use crate::error::{Error, Result};
use crate::primes::is_prime_u64;

/// The p-adic order of a rational: a finite exponent, or `Infinite` for zero.
///
/// `Infinite` compares greater than every finite order, so `min` over a list
/// of orders is total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PAdicOrder {
    Finite(i64),
    Infinite,
}

impl PAdicOrder {
    pub fn finite(self) -> Option<i64> {
        match self {
            PAdicOrder::Finite(v) => Some(v),
            PAdicOrder::Infinite => None,
        }
    }

    pub fn is_negative(self) -> bool {
        matches!(self, PAdicOrder::Finite(v) if v < 0)
    }
}

impl Ord for PAdicOrder {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PAdicOrder::Finite(a), PAdicOrder::Finite(b)) => a.cmp(b),
            (PAdicOrder::Finite(_), PAdicOrder::Infinite) => Ordering::Less,
            (PAdicOrder::Infinite, PAdicOrder::Finite(_)) => Ordering::Greater,
            (PAdicOrder::Infinite, PAdicOrder::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for PAdicOrder {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for PAdicOrder {
    type Output = PAdicOrder;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (PAdicOrder::Finite(a), PAdicOrder::Finite(b)) => PAdicOrder::Finite(a + b),
            _ => PAdicOrder::Infinite,
        }
    }
}

impl fmt::Display for PAdicOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PAdicOrder::Finite(v) => write!(f, "{v}"),
            PAdicOrder::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for PAdicOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PAdicOrder::Finite(v) => s.serialize_i64(*v),
            PAdicOrder::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer. Strips `p^(2^j)` blocks first so
/// large valuations cost O(log v) big divisions.
fn int_valuation(p: &BigInt, n: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut n = n.clone();
    let mut v = 0i64;
    let mut powers = vec![(p.clone(), 1i64)];
    loop {
        let (last, w) = powers.last().unwrap().clone();
        if !n.is_multiple_of(&last) {
            break;
        }
        n /= &last;
        v += w;
        powers.push((&last * &last, 2 * w));
    }
    while let Some((pk, w)) = powers.pop() {
        while n.is_multiple_of(&pk) {
            n /= &pk;
            v += w;
        }
    }
    v
}

/// The p-adic order of an integer (`Infinite` for zero). `p` must be prime.
pub fn padic_order_int(p: u64, n: &BigInt) -> Result<PAdicOrder> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if n.is_zero() {
        return Ok(PAdicOrder::Infinite);
    }
    Ok(PAdicOrder::Finite(int_valuation(&BigInt::from(p), n)))
}

/// `ν_p(a)`: the `n` with `a = (u/v)·p^n`, `p ∤ u`, `p ∤ v`; `Infinite` for zero.
pub fn padic_order(p: u64, a: &Rational) -> Result<PAdicOrder> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if a.is_zero() {
        return Ok(PAdicOrder::Infinite);
    }
    let pb = BigInt::from(p);
    let num = int_valuation(&pb, a.numer());
    // reduced, so at most one side carries p
    let den = if num == 0 && !a.denom().is_one() {
        int_valuation(&pb, a.denom())
    } else {
        0
    };
    Ok(PAdicOrder::Finite(num - den))
}
