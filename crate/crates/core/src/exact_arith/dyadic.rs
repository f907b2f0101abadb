use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Fractional bits used by certified sums unless stated otherwise.
pub const DEFAULT_PRECISION: u32 = 96;

/// Extra integer bits tolerated in the mantissa before large values are
/// themselves rounded.
const HEADROOM_BITS: u64 = 64;

/// A nonnegative dyadic number `mantissa · 2^exponent` whose arithmetic rounds
/// toward `+∞`.
///
/// Results are kept on the grid `2^-precision` (absolute rounding error at most
/// one ulp per operation) and the mantissa stays below `2^(precision + 64)`.
/// Every operation over-approximates the exact real result, so a computed
/// `value < bound` is a proof that the exact value is below `bound`.
#[derive(Clone, Debug)]
pub struct DyadicUpper {
    mantissa: BigUint,
    exponent: i64,
    precision: u32,
}

fn shr_ceil(m: &BigUint, k: u64) -> BigUint {
    if k == 0 {
        return m.clone();
    }
    let q = m >> k;
    if (&q << k) == *m {
        q
    } else {
        q + 1u32
    }
}

impl DyadicUpper {
    pub fn zero(precision: u32) -> Self {
        Self {
            mantissa: BigUint::zero(),
            exponent: 0,
            precision,
        }
    }

    pub fn from_integer(n: impl Into<BigUint>, precision: u32) -> Self {
        Self::normalized(n.into(), 0, precision)
    }

    /// The smallest grid point `>= q`. Negative inputs are rejected.
    pub fn from_rational_up(q: &Rational, precision: u32) -> Result<Self> {
        let (n, d) = q
            .to_biguint_parts()
            .ok_or_else(|| Error::InvalidArgument("DyadicUpper requires a nonnegative value".into()))?;
        let m = Integer::div_ceil(&(n << precision), &d);
        Ok(Self::normalized(m, -(precision as i64), precision))
    }

    /// Upper bound on `1 / k^s`.
    pub fn recip_pow(k: u64, s: u32, precision: u32) -> Self {
        assert!(k > 0, "recip_pow of zero");
        let den = num_traits::pow(BigUint::from(k), s as usize);
        let m = Integer::div_ceil(&(BigUint::one() << precision), &den);
        Self::normalized(m, -(precision as i64), precision)
    }

    fn normalized(mut mantissa: BigUint, mut exponent: i64, precision: u32) -> Self {
        if mantissa.is_zero() {
            return Self::zero(precision);
        }
        let floor_exp = -(precision as i64);
        if exponent < floor_exp {
            mantissa = shr_ceil(&mantissa, (floor_exp - exponent) as u64);
            exponent = floor_exp;
        }
        let cap = precision as u64 + HEADROOM_BITS;
        while mantissa.bits() > cap {
            let excess = mantissa.bits() - cap;
            mantissa = shr_ceil(&mantissa, excess);
            exponent += excess as i64;
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            mantissa >>= tz;
            exponent += tz as i64;
        }
        Self {
            mantissa,
            exponent,
            precision,
        }
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    fn out_precision(&self, other: &Self) -> u32 {
        self.precision.max(other.precision)
    }

    pub fn add(&self, other: &Self) -> Self {
        let precision = self.out_precision(other);
        if self.is_zero() {
            return Self::normalized(other.mantissa.clone(), other.exponent, precision);
        }
        if other.is_zero() {
            return Self::normalized(self.mantissa.clone(), self.exponent, precision);
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        Self::normalized(a + b, e, precision)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::normalized(
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
            self.out_precision(other),
        )
    }

    /// Upper bound on `self / other`: the quotient on the `2^-precision`
    /// grid is floor-divided and bumped by one ulp whenever inexact.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let precision = self.out_precision(other);
        let shift = self.exponent - other.exponent + precision as i64;
        let (num, den) = if shift >= 0 {
            (&self.mantissa << shift as u64, other.mantissa.clone())
        } else {
            (self.mantissa.clone(), &other.mantissa << (-shift) as u64)
        };
        let (q, rem) = num.div_rem(&den);
        let q = if rem.is_zero() { q } else { q + 1u32 };
        Ok(Self::normalized(q, -(precision as i64), precision))
    }

    pub fn to_rational(&self) -> Rational {
        let m = BigInt::from(self.mantissa.clone());
        if self.exponent >= 0 {
            Rational::from_integer(m << self.exponent as u64)
        } else {
            Rational::new(m, BigInt::one() << (-self.exponent) as u64).expect("nonzero power of two")
        }
    }

    /// Exact comparison against a rational.
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        self.to_rational().cmp(q)
    }

    pub fn lt_rational(&self, q: &Rational) -> bool {
        self.cmp_rational(q) == Ordering::Less
    }
}

impl PartialEq for DyadicUpper {
    fn eq(&self, other: &Self) -> bool {
        self.mantissa == other.mantissa && self.exponent == other.exponent
    }
}

impl Eq for DyadicUpper {}

impl PartialOrd for DyadicUpper {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicUpper {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_rational().cmp(&other.to_rational())
    }
}

impl fmt::Display for DyadicUpper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}
