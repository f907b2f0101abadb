//! One-sided certified bounds for `exp`, `ln`, `sqrt` and `e`.
//!
//! Each function returns a dyadic rational on the `2^-BITS` grid that is
//! provably on the named side of the true value. Series are truncated with
//! explicit remainder bounds; every intermediate is rounded in the direction
//! that keeps the final answer on its side.

use num_bigint::BigInt;
use num_traits::One;

use super::Rational;

/// Grid resolution for all bounds produced here.
pub const BITS: u32 = 128;

fn grid(bits: u32) -> BigInt {
    BigInt::one() << bits
}

pub fn round_down(q: &Rational, bits: u32) -> Rational {
    let g = grid(bits);
    Rational::new((q * &Rational::from_integer(g.clone())).floor(), g).unwrap()
}

pub fn round_up(q: &Rational, bits: u32) -> Rational {
    let g = grid(bits);
    Rational::new((q * &Rational::from_integer(g.clone())).ceil(), g).unwrap()
}

fn half() -> Rational {
    Rational::from_ratio(1, 2).unwrap()
}

/// `(lower, upper)` for `exp(x)`, `x >= 0`.
fn exp_nonneg(x: &Rational) -> (Rational, Rational) {
    debug_assert!(!x.is_negative());
    // reduce to y = x / 2^k <= 1/2
    let mut k = 0u32;
    let mut y = x.clone();
    let h = half();
    while y > h {
        y = &y * &h;
        k += 1;
    }
    let stop = Rational::new(BigInt::one(), grid(BITS + 4)).unwrap();
    let mut term_lo = Rational::one();
    let mut term_hi = Rational::one();
    let mut sum_lo = Rational::one();
    let mut sum_hi = Rational::one();
    let mut i = 1u64;
    loop {
        let i_q = Rational::from(i);
        term_lo = round_down(&(&term_lo * &y).checked_div(&i_q).unwrap(), BITS + 8);
        term_hi = round_up(&(&term_hi * &y).checked_div(&i_q).unwrap(), BITS + 8);
        sum_lo = &sum_lo + &term_lo;
        sum_hi = &sum_hi + &term_hi;
        if term_hi < stop {
            break;
        }
        i += 1;
    }
    // tail after term i: sum_{j>i} y^j/j! <= term_i * y/(i+1) * 1/(1 - y/(i+2)) <= 2 * term_i * y/(i+1)
    let tail = (&(&term_hi * &y) * &Rational::from(2u64))
        .checked_div(&Rational::from(i + 1))
        .unwrap();
    sum_hi = &sum_hi + &tail;
    let mut lo = round_down(&sum_lo, BITS + 8);
    let mut hi = round_up(&sum_hi, BITS + 8);
    for _ in 0..k {
        lo = round_down(&(&lo * &lo), BITS + 8);
        hi = round_up(&(&hi * &hi), BITS + 8);
    }
    (round_down(&lo, BITS), round_up(&hi, BITS))
}

fn exp_pair(x: &Rational) -> (Rational, Rational) {
    if x.is_negative() {
        let (lo, hi) = exp_nonneg(&-x.clone());
        // exp(x) = 1/exp(-x)
        let lower = round_down(&hi.recip().unwrap(), BITS);
        let upper = round_up(&lo.recip().unwrap(), BITS);
        (lower, upper)
    } else {
        exp_nonneg(x)
    }
}

pub fn exp_upper(x: &Rational) -> Rational {
    exp_pair(x).1
}

pub fn exp_lower(x: &Rational) -> Rational {
    exp_pair(x).0
}

pub fn e_upper() -> Rational {
    exp_upper(&Rational::one())
}

pub fn e_lower() -> Rational {
    exp_lower(&Rational::one())
}

/// `(lower, upper)` for `atanh(z)`, `0 <= z <= 1/3`.
fn atanh_small(z: &Rational) -> (Rational, Rational) {
    let z2_lo = round_down(&(z * z), BITS + 8);
    let z2_hi = round_up(&(z * z), BITS + 8);
    let mut pow_lo = z.clone();
    let mut pow_hi = z.clone();
    let mut sum_lo = Rational::zero();
    let mut sum_hi = Rational::zero();
    let stop = Rational::new(BigInt::one(), grid(BITS + 4)).unwrap();
    let mut j = 1u64;
    loop {
        let jq = Rational::from(j);
        sum_lo = &sum_lo + &round_down(&pow_lo.checked_div(&jq).unwrap(), BITS + 8);
        sum_hi = &sum_hi + &round_up(&pow_hi.checked_div(&jq).unwrap(), BITS + 8);
        pow_lo = round_down(&(&pow_lo * &z2_lo), BITS + 8);
        pow_hi = round_up(&(&pow_hi * &z2_hi), BITS + 8);
        j += 2;
        if pow_hi < stop {
            break;
        }
    }
    // tail: sum_{i>=0} z^(j+2i)/(j+2i) <= z^j / (j (1 - z^2)) <= (9/8) z^j / j for z <= 1/3
    let tail = (&pow_hi * &Rational::from_ratio(9, 8).unwrap())
        .checked_div(&Rational::from(j))
        .unwrap();
    (sum_lo, &sum_hi + &tail)
}

fn ln2_pair() -> (Rational, Rational) {
    let (lo, hi) = atanh_small(&Rational::from_ratio(1, 3).unwrap());
    let two = Rational::from(2u64);
    (&lo * &two, &hi * &two)
}

/// `(lower, upper)` for `ln(x)`, `x >= 1`.
fn ln_ge_one(x: &Rational) -> (Rational, Rational) {
    debug_assert!(*x >= 1u64);
    // x = 2^k * y with y in [1, 2)
    let k = x.floor().bits().saturating_sub(1);
    let y = x
        .checked_div(&Rational::from_integer(BigInt::one() << k))
        .unwrap();
    let one = Rational::one();
    let z = (&y - &one).checked_div(&(&y + &one)).unwrap();
    let (a_lo, a_hi) = atanh_small(&z);
    let (l2_lo, l2_hi) = ln2_pair();
    let kq = Rational::from(k);
    let two = Rational::from(2u64);
    let lo = &(&kq * &l2_lo) + &(&two * &a_lo);
    let hi = &(&kq * &l2_hi) + &(&two * &a_hi);
    (round_down(&lo, BITS), round_up(&hi, BITS))
}

fn ln_pair(x: &Rational) -> (Rational, Rational) {
    assert!(x.is_positive(), "ln of a non-positive value");
    if *x >= 1u64 {
        ln_ge_one(x)
    } else {
        let (lo, hi) = ln_ge_one(&x.recip().unwrap());
        (-hi, -lo)
    }
}

pub fn ln_upper(x: &Rational) -> Rational {
    ln_pair(x).1
}

pub fn ln_lower(x: &Rational) -> Rational {
    ln_pair(x).0
}

fn sqrt_pair(x: &Rational) -> (Rational, Rational) {
    assert!(!x.is_negative(), "sqrt of a negative value");
    let g = grid(BITS);
    let scaled = x * &Rational::from_integer(&g * &g);
    let s = scaled.floor().sqrt();
    let lower = Rational::new(s.clone(), g.clone()).unwrap();
    let upper = if (&s * &s) == scaled.floor() && scaled.is_integer() {
        lower.clone()
    } else {
        Rational::new(s + 1, g).unwrap()
    };
    (lower, upper)
}

pub fn sqrt_upper(x: &Rational) -> Rational {
    sqrt_pair(x).1
}

pub fn sqrt_lower(x: &Rational) -> Rational {
    sqrt_pair(x).0
}
