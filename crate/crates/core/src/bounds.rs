//! Bounds on `s_1` beyond which `H_n(s_1, tail)` has negative p-adic order,
//! and the analytic size estimates that close the large-length cases.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::transcend::{e_upper, exp_lower, ln_upper};
use crate::exact_arith::{padic_order, PAdicOrder, Rational};
use crate::mhs::ScaledCoefficients;
use crate::primes::{growth_bound_upper, largest_prime_up_to, PrimeSieve};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundVariant {
    /// `r = n`: the sum is a single non-integral term for every `s_1`.
    Trivial,
    /// `max(ν_p(c_p), ν_p(c_p) - min_{k≠p} ν_p(c_k))`
    M,
    /// `ν_p(c_p) + max(s_2, ..., s_r)`, valid when `p > n/2`.
    MPrime,
}

/// For every integer `s_1 > value`, `ν_p(H_n(s_1, tail)) < 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct S1Bound {
    pub n: u64,
    pub tail: Vec<u32>,
    /// Largest prime `<= n - r + 1`; absent for the trivial case.
    pub p: Option<u64>,
    pub value: i64,
    pub variant: BoundVariant,
    pub nu_cp: Option<i64>,
}

fn validate(n: u64, tail: &[u32]) -> Result<usize> {
    if tail.is_empty() {
        return Err(Error::InvalidArgument("s_1 bounds need r >= 2".into()));
    }
    if tail.contains(&0) {
        return Err(Error::InvalidArgument("tail exponents must be positive".into()));
    }
    let r = tail.len() + 1;
    if r as u64 > n {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds n = {n}")));
    }
    Ok(r)
}

fn trivial(n: u64, tail: &[u32]) -> S1Bound {
    S1Bound {
        n,
        tail: tail.to_vec(),
        p: None,
        value: 0,
        variant: BoundVariant::Trivial,
        nu_cp: None,
    }
}

fn finite(v: PAdicOrder) -> i64 {
    v.finite().expect("suffix coefficients are positive")
}

/// `M` from every suffix coefficient `c_1, ..., c_{n-r+1}`.
pub fn compute_m(n: u64, tail: &[u32], sieve: &PrimeSieve) -> Result<S1Bound> {
    let r = validate(n, tail)?;
    if r as u64 == n {
        return Ok(trivial(n, tail));
    }
    let p = largest_prime_up_to(n - r as u64 + 1, sieve)?;
    let coeffs = ScaledCoefficients::new(n, tail)?;
    let nu_cp = finite(padic_order(p, &coeffs.coefficient(p))?);
    let min_other = (1..=coeffs.len() as u64)
        .filter(|&k| k != p)
        .map(|k| padic_order(p, &coeffs.coefficient(k)).map(finite))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .expect("k = 1 differs from p");
    Ok(S1Bound {
        n,
        tail: tail.to_vec(),
        p: Some(p),
        value: nu_cp.max(nu_cp - min_other),
        variant: BoundVariant::M,
        nu_cp: Some(nu_cp),
    })
}

/// `c_p = Σ_{p < k_2 < ... < k_r <= n} Π 1/k_i^{s_i}`, touching only
/// `k ∈ (p, n]`.
pub fn tail_sum_above(p: u64, n: u64, tail: &[u32]) -> Rational {
    let m = tail.len();
    let mut f = vec![Rational::zero(); m + 1];
    f[0] = Rational::one();
    for j in p + 1..=n {
        for t in (1..=m).rev() {
            if f[t - 1].is_zero() {
                continue;
            }
            let add = &f[t - 1] * &Rational::recip_pow(j, tail[t - 1]);
            f[t] = &f[t] + &add;
        }
    }
    f.pop().unwrap()
}

/// `M'`; fails with [`Error::PrimeTooSmall`] when the largest prime
/// `p <= n - r + 1` has `2p <= n`.
pub fn compute_m_prime(n: u64, tail: &[u32], sieve: &PrimeSieve) -> Result<S1Bound> {
    let r = validate(n, tail)?;
    if r as u64 == n {
        return Ok(trivial(n, tail));
    }
    let p = largest_prime_up_to(n - r as u64 + 1, sieve)?;
    if 2 * p <= n {
        return Err(Error::PrimeTooSmall { p, n });
    }
    let nu_cp = finite(padic_order(p, &tail_sum_above(p, n, tail))?);
    let max_tail = *tail.iter().max().unwrap() as i64;
    Ok(S1Bound {
        n,
        tail: tail.to_vec(),
        p: Some(p),
        value: nu_cp + max_tail,
        variant: BoundVariant::MPrime,
        nu_cp: Some(nu_cp),
    })
}

/// `M'` when its precondition holds, otherwise `M`.
pub fn applicable_bound(n: u64, tail: &[u32], sieve: &PrimeSieve) -> Result<S1Bound> {
    match compute_m_prime(n, tail, sieve) {
        Err(Error::PrimeTooSmall { .. }) => compute_m(n, tail, sieve),
        other => other,
    }
}

fn factorial(r: u64) -> Rational {
    Rational::from_integer((1..=r).fold(num_bigint::BigInt::from(1u32), |acc, k| acc * k))
}

/// Certified upper bound on `(ln n + 1)^r / r!`, which dominates every
/// `H_n(s)` of length `r`.
pub fn remark2_bound(n: u64, r: u64) -> Result<Rational> {
    if r == 0 || n == 0 {
        return Err(Error::InvalidArgument("need 1 <= r and 1 <= n".into()));
    }
    let base = &ln_upper(&Rational::from(n)) + &Rational::one();
    base.pow(r as u32).checked_div(&factorial(r))
}

/// `e·(ln n + 1) <= r`, evaluated with upper bounds for `e` and `ln n`, so
/// `true` is certain. Then every `H_n(s)` of length `r` is below 1.
pub fn large_r_criterion(n: u64, r: u64) -> bool {
    if n == 0 {
        return false;
    }
    let lhs = &e_upper() * &(&ln_upper(&Rational::from(n)) + &Rational::one());
    lhs <= r
}

/// `(r+1)·exp(√(1.4 r)) <= exp(r/e - 1)`, upper bound on the left, lower
/// bound on the right.
pub fn check_r30_inequality(r: u64) -> bool {
    let lhs = growth_bound_upper(r);
    let exponent = &Rational::from(r).checked_div(&e_upper()).unwrap() - &Rational::one();
    lhs <= exp_lower(&exponent)
}
