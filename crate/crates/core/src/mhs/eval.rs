use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use super::Composition;
use crate::error::{Error, Result};
use crate::exact_arith::{DyadicUpper, Rational, DEFAULT_PRECISION};
use crate::primes::is_prime_u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SumKind {
    Ordinary,
    Star,
}

/// An evaluated sum together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MhsValue {
    pub n: u64,
    pub composition: Composition,
    pub value: Rational,
    pub kind: SumKind,
}

impl MhsValue {
    /// `true` for the empty ordinary sum (`n < r`), which is zero.
    pub fn is_empty_sum(&self) -> bool {
        self.kind == SumKind::Ordinary && self.n < self.composition.len() as u64
    }
}

/// Gate for exact evaluation: denominators grow like `lcm(1..n)^|s|`, so
/// exact sums are only attempted while `n·r` stays under the threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CostPolicy {
    pub threshold: u64,
}

impl Default for CostPolicy {
    fn default() -> Self {
        Self { threshold: 4096 }
    }
}

impl CostPolicy {
    pub fn unlimited() -> Self {
        Self {
            threshold: u64::MAX,
        }
    }

    pub fn allows(&self, n: u64, r: usize) -> bool {
        n.saturating_mul(r as u64) <= self.threshold
    }

    pub fn check(&self, n: u64, r: usize) -> Result<()> {
        if self.allows(n, r) {
            Ok(())
        } else {
            Err(Error::CostExceeded {
                n,
                r,
                threshold: self.threshold,
            })
        }
    }
}

/// `lcm(1, ..., n)`.
pub fn lcm_up_to(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for p in 2..=n {
        if is_prime_u64(p) {
            let mut pk = p;
            while pk <= n / p {
                pk *= p;
            }
            acc *= pk;
        }
    }
    acc
}

/// Common-denominator bookkeeping: every term `1/(k_1^{s_1}...)` with
/// `k_i <= n` times `L^{Σ s_i}` is an integer when `L = lcm(1..n)`, so the
/// dynamic programs below run on integers and reduce once at the end.
struct Scale {
    lcm: BigUint,
    /// `quot[j] = L / j`
    quot: Vec<BigUint>,
}

impl Scale {
    fn new(n: u64) -> Self {
        let lcm = lcm_up_to(n);
        let mut quot = Vec::with_capacity(n as usize + 1);
        quot.push(BigUint::zero());
        for j in 1..=n {
            quot.push(&lcm / j);
        }
        Self { lcm, quot }
    }

    /// `(L/j)^e` for `e = 0..=max_e`.
    fn powers(&self, j: u64, max_e: u32) -> Vec<BigUint> {
        let mut out = Vec::with_capacity(max_e as usize + 1);
        out.push(BigUint::one());
        for e in 1..=max_e as usize {
            let next = &out[e - 1] * &self.quot[j as usize];
            out.push(next);
        }
        out
    }

    fn to_rational(&self, numer: BigUint, weight: u64) -> Rational {
        let denom = num_traits::pow(self.lcm.clone(), weight as usize);
        Rational::new(BigInt::from(numer), BigInt::from(denom)).expect("lcm is positive")
    }
}

/// Exact `H_n(s)`. Zero when `n < r`.
///
/// Prefix recursion `H_j(s_1..s_t) = H_{j-1}(s_1..s_t) + H_{j-1}(s_1..s_{t-1}) / j^{s_t}`,
/// run on numerators over the common denominator `lcm(1..n)^{|s|}`.
pub fn mhs_eval(n: u64, s: &Composition) -> Rational {
    let r = s.len();
    if n < r as u64 {
        return Rational::zero();
    }
    let exps = s.exponents();
    let scale = Scale::new(n);
    let max_e = s.max_exponent();
    let mut g: Vec<BigUint> = vec![BigUint::zero(); r + 1];
    g[0] = BigUint::one();
    for j in 1..=n {
        let pw = scale.powers(j, max_e);
        let top = r.min(j as usize);
        for t in (1..=top).rev() {
            if g[t - 1].is_zero() {
                continue;
            }
            let add = &g[t - 1] * &pw[exps[t - 1] as usize];
            g[t] += add;
        }
    }
    scale.to_rational(g.pop().unwrap(), s.weight())
}

/// Exact `H*_n(s)` by the weak-inequality recursion
/// `H*_j(s_1..s_t) = H*_{j-1}(s_1..s_t) + H*_j(s_1..s_{t-1}) / j^{s_t}`.
pub fn mhs_star_eval(n: u64, s: &Composition) -> Rational {
    let r = s.len();
    if n == 0 {
        return Rational::zero();
    }
    let exps = s.exponents();
    let scale = Scale::new(n);
    let max_e = s.max_exponent();
    let mut g: Vec<BigUint> = vec![BigUint::zero(); r + 1];
    g[0] = BigUint::one();
    for j in 1..=n {
        let pw = scale.powers(j, max_e);
        for t in 1..=r {
            let add = &g[t - 1] * &pw[exps[t - 1] as usize];
            g[t] += add;
        }
    }
    scale.to_rational(g.pop().unwrap(), s.weight())
}

pub fn mhs_eval_checked(n: u64, s: &Composition, policy: &CostPolicy) -> Result<MhsValue> {
    policy.check(n, s.len())?;
    Ok(MhsValue {
        n,
        composition: s.clone(),
        value: mhs_eval(n, s),
        kind: SumKind::Ordinary,
    })
}

pub fn mhs_star_eval_checked(n: u64, s: &Composition, policy: &CostPolicy) -> Result<MhsValue> {
    policy.check(n, s.len())?;
    Ok(MhsValue {
        n,
        composition: s.clone(),
        value: mhs_star_eval(n, s),
        kind: SumKind::Star,
    })
}

/// The suffix coefficients `c_1, ..., c_{n-r+1}` of `H_n(s_1, tail)`, kept as
/// integer numerators over `L^{|tail|}` so that `H_n(s_1, tail)` can be formed
/// for many `s_1` without recomputing them.
pub struct ScaledCoefficients {
    scale: Scale,
    tail_weight: u64,
    /// `numerators[k - 1] = c_k · L^{|tail|}`
    numerators: Vec<BigUint>,
}

impl ScaledCoefficients {
    /// `tail` is `(s_2, ..., s_r)`; requires `n > r`.
    pub fn new(n: u64, tail: &[u32]) -> Result<Self> {
        let r = tail.len() + 1;
        if tail.is_empty() {
            return Err(Error::InvalidArgument("suffix coefficients need r >= 2".into()));
        }
        if let Some(i) = tail.iter().position(|&e| e == 0) {
            return Err(Error::InvalidArgument(format!("tail exponent {} is zero", i + 2)));
        }
        if n <= r as u64 {
            return Err(Error::InvalidArgument(format!(
                "suffix coefficients need n > r (n = {n}, r = {r})"
            )));
        }
        let scale = Scale::new(n);
        let max_e = *tail.iter().max().unwrap();
        let last_k = n - r as u64 + 1;
        // e[t] holds D(k, t) = Σ_{k < k_t < ... < k_r <= n} Π_{i >= t} 1/k_i^{s_i}
        // for tail positions t = 0..tail.len(); e[tail.len()] is the empty product.
        let m = tail.len();
        let mut e: Vec<BigUint> = vec![BigUint::zero(); m + 1];
        e[m] = BigUint::one();
        let mut numerators = vec![BigUint::zero(); last_k as usize];
        for k in (1..=n).rev() {
            // step from D(k, .) to D(k-1, .)
            let pw = scale.powers(k, max_e);
            for t in 0..m {
                if e[t + 1].is_zero() {
                    continue;
                }
                let add = &e[t + 1] * &pw[tail[t] as usize];
                e[t] += add;
            }
            let below = k - 1;
            if below >= 1 && below <= last_k {
                numerators[below as usize - 1] = e[0].clone();
            }
        }
        Ok(Self {
            scale,
            tail_weight: tail.iter().map(|&x| x as u64).sum(),
            numerators,
        })
    }

    /// Number of coefficients, `n - r + 1`.
    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    /// `c_k` for `1 <= k <= n - r + 1`.
    pub fn coefficient(&self, k: u64) -> Rational {
        self.scale
            .to_rational(self.numerators[k as usize - 1].clone(), self.tail_weight)
    }

    pub fn coefficients(&self) -> Vec<Rational> {
        (1..=self.len() as u64).map(|k| self.coefficient(k)).collect()
    }

    /// `H_n(s_1, tail) = Σ_k c_k / k^{s_1}`.
    pub fn eval_with_first(&self, s1: u32) -> Rational {
        let mut acc = BigUint::zero();
        for (i, c) in self.numerators.iter().enumerate() {
            let q = &self.scale.quot[i + 1];
            acc += c * num_traits::pow(q.clone(), s1 as usize);
        }
        self.scale.to_rational(acc, self.tail_weight + s1 as u64)
    }

    /// Whether `H_n(s_1, tail)` is an integer, for `s_1 = 1..=max_s1`.
    /// Tests divisibility by the common denominator instead of reducing.
    pub fn integrality_up_to(&self, max_s1: u32) -> Vec<bool> {
        let mut terms: Vec<BigUint> = self.numerators.clone();
        let mut denom = num_traits::pow(self.scale.lcm.clone(), self.tail_weight as usize);
        let mut out = Vec::with_capacity(max_s1 as usize);
        for _ in 0..max_s1 {
            let mut acc = BigUint::zero();
            for (i, term) in terms.iter_mut().enumerate() {
                *term *= &self.scale.quot[i + 1];
                acc += &*term;
            }
            denom *= &self.scale.lcm;
            out.push((acc % &denom).is_zero());
        }
        out
    }
}

/// `c_k = Σ_{k < k_2 < ... < k_r <= n} 1/(k_2^{s_2} ... k_r^{s_r})` for
/// `k = 1..=n-r+1`.
pub fn suffix_coefficients(n: u64, s: &Composition) -> Result<Vec<Rational>> {
    Ok(ScaledCoefficients::new(n, s.tail())?.coefficients())
}

/// Upper bound on `H_n(s)` by the prefix recursion in upward-rounded dyadic
/// arithmetic at [`DEFAULT_PRECISION`] fractional bits.
pub fn mhs_upper_eval(n: u64, s: &Composition) -> DyadicUpper {
    mhs_upper_eval_with(n, s, DEFAULT_PRECISION)
}

pub fn mhs_upper_eval_with(n: u64, s: &Composition, precision: u32) -> DyadicUpper {
    let r = s.len();
    if n < r as u64 {
        return DyadicUpper::zero(precision);
    }
    let exps = s.exponents();
    let mut g: Vec<DyadicUpper> = vec![DyadicUpper::zero(precision); r + 1];
    g[0] = DyadicUpper::from_integer(1u32, precision);
    let mut distinct: Vec<u32> = exps.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mut recips: Vec<Option<DyadicUpper>> = vec![None; s.max_exponent() as usize + 1];
    for j in 1..=n {
        for &e in &distinct {
            recips[e as usize] = Some(DyadicUpper::recip_pow(j, e, precision));
        }
        let top = r.min(j as usize);
        for t in (1..=top).rev() {
            if g[t - 1].is_zero() {
                continue;
            }
            let w = recips[exps[t - 1] as usize].as_ref().unwrap();
            let add = g[t - 1].mul(w);
            g[t] = g[t].add(&add);
        }
    }
    g.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mhs::parse_composition;

    fn c(text: &str) -> Composition {
        parse_composition(text).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d).unwrap()
    }

    #[test]
    fn ordinary_examples() {
        assert_eq!(mhs_eval(3, &c("1,1")), Rational::one());
        assert_eq!(mhs_eval(4, &c("1")), q(25, 12));
        assert_eq!(mhs_eval(4, &c("1,1")), q(35, 24));
        for k in 1..=10 {
            assert_eq!(mhs_eval(1, &Composition::new(vec![k]).unwrap()), Rational::one());
        }
    }

    #[test]
    fn empty_sum_is_zero() {
        assert_eq!(mhs_eval(2, &c("1,1,1")), Rational::zero());
        let v = mhs_eval_checked(2, &c("1,1,1"), &CostPolicy::default()).unwrap();
        assert!(v.is_empty_sum());
        assert!(!mhs_eval_checked(3, &c("1,1,1"), &CostPolicy::default())
            .unwrap()
            .is_empty_sum());
    }

    #[test]
    fn star_examples() {
        assert_eq!(mhs_star_eval(1, &c("7")), Rational::one());
        assert_eq!(mhs_star_eval(2, &c("1,1")), q(7, 4));
        assert_eq!(mhs_star_eval(3, &c("1,1")), q(85, 36));
    }

    #[test]
    fn cost_gate() {
        let p = CostPolicy::default();
        assert!(mhs_eval_checked(1024, &c("1,1,1,1"), &p).is_ok());
        assert_eq!(
            mhs_eval_checked(1025, &c("1,1,1,1"), &p).unwrap_err(),
            Error::CostExceeded {
                n: 1025,
                r: 4,
                threshold: 4096
            }
        );
    }

    #[test]
    fn suffix_examples() {
        let cs = suffix_coefficients(10, &c("1,1")).unwrap();
        assert_eq!(cs.len(), 9);
        assert_eq!(cs[6], q(121, 360));
        let cs = suffix_coefficients(4, &c("1,1")).unwrap();
        assert_eq!(cs[2], q(1, 4));
        assert_eq!(cs[0], q(13, 12));
    }

    #[test]
    fn suffix_identity() {
        for (n, s) in [(10, "1,1"), (9, "2,1,3"), (12, "1,2,1,1"), (7, "3,2")] {
            let s = c(s);
            let cs = suffix_coefficients(n, &s).unwrap();
            let total: Rational = cs
                .iter()
                .enumerate()
                .map(|(i, ck)| ck * &Rational::recip_pow(i as u64 + 1, s.first()))
                .sum();
            assert_eq!(total, mhs_eval(n, &s));
            let scaled = ScaledCoefficients::new(n, s.tail()).unwrap();
            assert_eq!(scaled.eval_with_first(s.first()), mhs_eval(n, &s));
        }
    }

    #[test]
    fn integrality_flags_match_exact() {
        for (n, tail) in [(3u64, vec![1u32]), (10, vec![1]), (9, vec![2, 1]), (12, vec![1, 1, 2])] {
            let scaled = ScaledCoefficients::new(n, &tail).unwrap();
            let flags = scaled.integrality_up_to(5);
            for (i, flag) in flags.into_iter().enumerate() {
                assert_eq!(flag, scaled.eval_with_first(i as u32 + 1).is_integer());
            }
        }
        // H_3(1,1) = 1
        assert!(ScaledCoefficients::new(3, &[1]).unwrap().integrality_up_to(1)[0]);
    }

    #[test]
    fn suffix_errors() {
        assert!(suffix_coefficients(2, &c("1,1")).is_err());
        assert!(suffix_coefficients(5, &c("1")).is_err());
    }

    #[test]
    fn upper_eval_brackets() {
        let u = mhs_upper_eval(4, &c("1")).to_rational();
        let exact = q(25, 12);
        assert!(u >= exact);
        let eps = Rational::new(BigInt::one(), BigInt::one() << 80u32).unwrap();
        assert!(&u - &exact < eps);
        assert!(mhs_upper_eval(2, &c("1,1,1")).is_zero());
    }

    #[test]
    fn lcm_small() {
        assert_eq!(lcm_up_to(1), BigUint::one());
        assert_eq!(lcm_up_to(10), BigUint::from(2520u32));
    }
}
