//! Primes, prime windows `(n/(r+1), n/r]`, the sets `A_r = ⋃_p [rp, (r+1)p)`
//! and their thresholds `m_r = max(ℕ ∖ A_r) + 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::transcend::{exp_lower, exp_upper, sqrt_lower, sqrt_upper};
use crate::exact_arith::Rational;

/// Large enough to cover `scan_bound(r)` for every `r <= 69`.
pub const DEFAULT_SIEVE_LIMIT: u64 = 2_000_000;

/// Above this limit the sieve switches to fixed-size segments.
const SEGMENT_THRESHOLD: u64 = 1_000_000;
const SEGMENT_LEN: u64 = 1 << 16;

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let d_shift = (n - 1).trailing_zeros();
    let d = (n - 1) >> d_shift;
    'witness: for &a in &BASES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..d_shift {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality table for `0..=limit`, plus the sorted list of primes.
#[derive(Clone, Debug)]
pub struct PrimeSieve {
    limit: u64,
    bits: Vec<u64>,
    primes: Vec<u64>,
}

fn simple_sieve(limit: u64) -> Vec<bool> {
    let mut is_prime = vec![true; limit as usize + 1];
    is_prime[0] = false;
    if limit >= 1 {
        is_prime[1] = false;
    }
    let mut i = 2usize;
    while i * i <= limit as usize {
        if is_prime[i] {
            for j in (i * i..=limit as usize).step_by(i) {
                is_prime[j] = false;
            }
        }
        i += 1;
    }
    is_prime
}

impl PrimeSieve {
    pub fn new(limit: u64) -> Self {
        let base_limit = limit.min(SEGMENT_THRESHOLD);
        let base = simple_sieve(base_limit);
        let mut primes: Vec<u64> = (0..=base_limit).filter(|&k| base[k as usize]).collect();

        if limit > SEGMENT_THRESHOLD {
            let root = (limit as f64).sqrt() as u64 + 1;
            let small: Vec<u64> = primes.iter().copied().take_while(|&p| p <= root).collect();
            let mut lo = SEGMENT_THRESHOLD + 1;
            let mut seg = vec![true; SEGMENT_LEN as usize];
            while lo <= limit {
                let hi = (lo + SEGMENT_LEN - 1).min(limit);
                let len = (hi - lo + 1) as usize;
                seg[..len].fill(true);
                for &p in &small {
                    if p * p > hi {
                        break;
                    }
                    let start = (lo.div_ceil(p) * p).max(p * p);
                    let mut m = start;
                    while m <= hi {
                        seg[(m - lo) as usize] = false;
                        m += p;
                    }
                }
                primes.extend((0..len).filter(|&i| seg[i]).map(|i| lo + i as u64));
                lo = hi + 1;
            }
        }

        let mut bits = vec![0u64; (limit as usize >> 6) + 1];
        for &p in &primes {
            bits[(p >> 6) as usize] |= 1 << (p & 63);
        }
        Self {
            limit,
            bits,
            primes,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `false` above the limit.
    pub fn is_prime(&self, k: u64) -> bool {
        k <= self.limit && self.bits[(k >> 6) as usize] & (1 << (k & 63)) != 0
    }

    /// `SieveLimit` when `n` is past the sieve.
    pub fn check(&self, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::SieveLimit {
                n,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    /// Primes in the closed range `[lo, hi]`.
    pub fn primes_between(&self, lo: u64, hi: u64) -> &[u64] {
        let a = self.primes.partition_point(|&p| p < lo);
        let b = self.primes.partition_point(|&p| p <= hi);
        &self.primes[a..b.max(a)]
    }
}

/// The half-open window `(n/(r+1), n/r]` and the primes inside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeWindow {
    pub n: u64,
    pub r: u64,
    #[serde(serialize_with = "ser_display")]
    pub lower: Rational,
    #[serde(serialize_with = "ser_display")]
    pub upper: Rational,
    pub primes_inside: Vec<u64>,
}

fn ser_display<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(q)
}

/// Integer bounds of the window: `p` is inside iff `lo <= p <= hi`, which is
/// `r·p <= n < (r+1)·p` in exact arithmetic.
fn window_range(n: u64, r: u64) -> (u64, u64) {
    (n / (r + 1) + 1, n / r)
}

pub fn primes_in_window(n: u64, r: u64, sieve: &PrimeSieve) -> Result<PrimeWindow> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    sieve.check(n)?;
    let (lo, hi) = window_range(n, r);
    let primes_inside = sieve.primes_between(lo, hi).to_vec();
    debug_assert!(primes_inside.iter().all(|&p| r * p <= n && n < (r + 1) * p));
    Ok(PrimeWindow {
        n,
        r,
        lower: Rational::from_ratio(n as i64, r as i64 + 1)?,
        upper: Rational::from_ratio(n as i64, r as i64)?,
        primes_inside,
    })
}

/// `n ∈ A_r`, i.e. the window `(n/(r+1), n/r]` contains a prime.
pub fn in_a_r(n: u64, r: u64, sieve: &PrimeSieve) -> Result<bool> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    sieve.check(n)?;
    let (lo, hi) = window_range(n, r);
    Ok(!sieve.primes_between(lo, hi).is_empty())
}

pub fn largest_prime_up_to(bound: u64, sieve: &PrimeSieve) -> Result<u64> {
    if bound < 2 {
        return Err(Error::NoPrimeBelow(bound));
    }
    sieve.check(bound)?;
    let idx = sieve.primes.partition_point(|&p| p <= bound);
    Ok(sieve.primes[idx - 1])
}

fn sqrt_arg(r: u64) -> Rational {
    // 1.4 r
    Rational::from_ratio(7 * r as i64, 5).unwrap()
}

/// Upper bound on `(r+1)·exp(√(1.4 r))`.
pub fn growth_bound_upper(r: u64) -> Rational {
    &Rational::from(r + 1) * &exp_upper(&sqrt_upper(&sqrt_arg(r)))
}

/// Lower bound on `(r+1)·exp(√(1.4 r))`.
pub fn growth_bound_lower(r: u64) -> Rational {
    &Rational::from(r + 1) * &exp_lower(&sqrt_lower(&sqrt_arg(r)))
}

/// Where the explicit scan for `m_r` stops. Past this point cofiniteness of
/// `A_r` follows from the short-interval prime theorem for `x >= 3275`.
pub fn scan_bound(r: u64) -> u64 {
    let growth: u64 = growth_bound_upper(r)
        .ceil()
        .try_into()
        .expect("scan bound fits in u64");
    9599.max(growth).max((r + 1) * 3275)
}

/// `m_r`: one more than the largest `n` in `1..=scan_bound(r)` outside `A_r`.
pub fn compute_m_r(r: u64, sieve: &PrimeSieve) -> Result<u64> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let bound = scan_bound(r);
    sieve.check(bound)?;
    // scanning downward: everything in (result, bound] is in A_r by construction
    for n in (1..=bound).rev() {
        if !in_a_r(n, r, sieve)? {
            return Ok(n + 1);
        }
    }
    Ok(1)
}

/// Whether `m_r <= (r+1)·exp(√(1.4 r))`, using a lower bound for the right
/// side so that `true` is certain.
pub fn lemma1_bound_check(r: u64, sieve: &PrimeSieve) -> Result<bool> {
    if r < 24 {
        return Err(Error::InvalidArgument(format!(
            "the growth bound on m_r is only claimed for r >= 24, got {r}"
        )));
    }
    let m = compute_m_r(r, sieve)?;
    Ok(growth_bound_lower(r) >= m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve() -> PrimeSieve {
        PrimeSieve::new(20_000)
    }

    #[test]
    fn miller_rabin() {
        let s = PrimeSieve::new(100_000);
        for k in 0..=100_000u64 {
            assert_eq!(is_prime_u64(k), s.is_prime(k), "{k}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn segmented_matches_simple() {
        let limit = SEGMENT_THRESHOLD + 3 * SEGMENT_LEN + 17;
        let seg = PrimeSieve::new(limit);
        let flat = simple_sieve(limit);
        let expected: Vec<u64> = (0..=limit).filter(|&k| flat[k as usize]).collect();
        assert_eq!(seg.primes(), &expected[..]);
        assert!(seg.is_prime(1_000_003));
        assert!(!seg.is_prime(limit + 1));
    }

    #[test]
    fn windows() {
        let s = sieve();
        assert_eq!(primes_in_window(10, 2, &s).unwrap().primes_inside, vec![5]);
        assert!(primes_in_window(21, 2, &s).unwrap().primes_inside.is_empty());
        assert_eq!(primes_in_window(7, 1, &s).unwrap().primes_inside, vec![5, 7]);
        let w = primes_in_window(10, 2, &s).unwrap();
        assert_eq!(w.lower, Rational::from_ratio(10, 3).unwrap());
        assert_eq!(w.upper, Rational::from(5u64));
    }

    #[test]
    fn membership() {
        let s = sieve();
        assert!(in_a_r(5, 1, &s).unwrap());
        assert!(!in_a_r(21, 2, &s).unwrap());
        assert!(in_a_r(22, 2, &s).unwrap());
        assert!(!in_a_r(1, 1, &s).unwrap());
    }

    #[test]
    fn sieve_limit_errors() {
        let s = PrimeSieve::new(100);
        assert_eq!(
            in_a_r(101, 1, &s),
            Err(Error::SieveLimit { n: 101, limit: 100 })
        );
        assert!(primes_in_window(101, 2, &s).is_err());
        assert!(compute_m_r(1, &s).is_err());
    }

    #[test]
    fn largest_prime() {
        let s = sieve();
        assert_eq!(largest_prime_up_to(9, &s).unwrap(), 7);
        assert_eq!(largest_prime_up_to(2, &s).unwrap(), 2);
        assert_eq!(largest_prime_up_to(144, &s).unwrap(), 139);
        assert_eq!(largest_prime_up_to(1, &s), Err(Error::NoPrimeBelow(1)));
    }

    #[test]
    fn small_thresholds() {
        let s = PrimeSieve::new(scan_bound(17));
        assert_eq!(compute_m_r(1, &s).unwrap(), 2);
        assert_eq!(compute_m_r(5, &s).unwrap(), 145);
        assert_eq!(compute_m_r(17, &s).unwrap(), 3587);
    }

    #[test]
    fn scan_bounds() {
        assert_eq!(scan_bound(1), 9599);
        assert_eq!(scan_bound(5), 6 * 3275);
        // past r = 46 the exponential term dominates
        assert!(scan_bound(47) > 48 * 3275);
        assert_eq!(scan_bound(46), 47 * 3275);
    }

    #[test]
    fn growth_check_rejects_small_r() {
        assert!(lemma1_bound_check(23, &sieve()).is_err());
    }
}
