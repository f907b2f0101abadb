use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{padic_order, Rational};
use crate::mhs::{mhs_eval, mhs_star_eval, mhs_upper_eval, Composition, CostPolicy, SumKind};
use crate::primes::{largest_prime_up_to, primes_in_window, PrimeSieve};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessMethod {
    /// `ν_p(H) < 0` for the recorded prime.
    Valuation,
    /// A certified upper bound below 1 on a positive sum.
    LessThanOne,
    /// The exact rational has denominator > 1.
    Exact,
}

/// How a valuation witness was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// The exact value was computed and its order taken.
    Recomputed,
    /// Only the prime's position was checked: exactly one index tuple is made
    /// of multiples of `p`, and every other term has strictly larger order.
    Structural,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonIntegralityWitness {
    pub n: u64,
    pub composition: Composition,
    pub kind: SumKind,
    pub method: WitnessMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valuation: Option<i64>,
    /// Certified upper bound as `p/q`, for less-than-one witnesses.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_bound: Option<String>,
    /// Exact value as `p/q`, for exact witnesses.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckKind>,
}

impl NonIntegralityWitness {
    fn base(n: u64, s: &Composition, kind: SumKind, method: WitnessMethod) -> Self {
        Self {
            n,
            composition: s.clone(),
            kind,
            method,
            prime: None,
            valuation: None,
            upper_bound: None,
            value: None,
            check: None,
        }
    }

    /// Whether the recorded data actually proves non-integrality.
    pub fn certifies(&self) -> bool {
        match self.method {
            WitnessMethod::Valuation => self.valuation.is_some_and(|v| v < 0),
            WitnessMethod::LessThanOne => self
                .upper_bound
                .as_deref()
                .and_then(|u| u.parse::<Rational>().ok())
                .is_some_and(|u| u < 1u64),
            WitnessMethod::Exact => self
                .value
                .as_deref()
                .and_then(|v| v.parse::<Rational>().ok())
                .is_some_and(|v| !v.is_integer()),
        }
    }

    /// Rebuilds the witness from its parameters and compares every field.
    pub fn replay(&self, sieve: &PrimeSieve, policy: &CostPolicy) -> Result<bool> {
        let again = match (self.method, self.kind) {
            (WitnessMethod::Valuation, SumKind::Star) => {
                Some(star_witness(self.n, &self.composition, sieve, policy)?)
            }
            (WitnessMethod::Valuation, SumKind::Ordinary) => {
                window_witness(self.n, &self.composition, sieve, policy)?
            }
            (WitnessMethod::LessThanOne, SumKind::Ordinary) => {
                less_than_one_witness(self.n, &self.composition)
            }
            (WitnessMethod::Exact, kind) => exact_witness(self.n, &self.composition, kind),
            (WitnessMethod::LessThanOne, SumKind::Star) => None,
        };
        Ok(again.as_ref() == Some(self))
    }
}

/// Valuation witness for `H*_n(s)`, `n >= 2`, at the largest prime
/// `p ∈ (n/2, n]`: the all-`p` tuple contributes `p^{-|s|}` and every other
/// term has order above `-|s|`, so `ν_p(H*_n(s)) = -|s|`.
pub fn star_witness(
    n: u64,
    s: &Composition,
    sieve: &PrimeSieve,
    policy: &CostPolicy,
) -> Result<NonIntegralityWitness> {
    if n < 2 {
        return Err(Error::InvalidArgument("star witnesses need n >= 2".into()));
    }
    let p = largest_prime_up_to(n, sieve)?;
    // Bertrand's postulate, checked rather than assumed
    if 2 * p <= n {
        return Err(Error::PrimeTooSmall { p, n });
    }
    let mut w = NonIntegralityWitness::base(n, s, SumKind::Star, WitnessMethod::Valuation);
    w.prime = Some(p);
    if policy.allows(n, s.len()) {
        let v = padic_order(p, &mhs_star_eval(n, s))?;
        w.valuation = v.finite();
        w.check = Some(CheckKind::Recomputed);
    } else {
        w.valuation = Some(-(s.weight() as i64));
        w.check = Some(CheckKind::Structural);
    }
    Ok(w)
}

/// Valuation witness for `H_n(s)` from a prime `p > r` in `(n/(r+1), n/r]`:
/// the multiples of `p` up to `n` are exactly `p, 2p, ..., rp`, so only one
/// index tuple reaches order `-|s|`. Picks the largest such prime; `None`
/// when there is none.
pub fn window_witness(
    n: u64,
    s: &Composition,
    sieve: &PrimeSieve,
    policy: &CostPolicy,
) -> Result<Option<NonIntegralityWitness>> {
    let r = s.len() as u64;
    if n < r {
        return Err(Error::InvalidArgument(format!("n = {n} is below r = {r}")));
    }
    let window = primes_in_window(n, r, sieve)?;
    let Some(&p) = window.primes_inside.iter().rev().find(|&&p| p > r) else {
        return Ok(None);
    };
    let mut w = NonIntegralityWitness::base(n, s, SumKind::Ordinary, WitnessMethod::Valuation);
    w.prime = Some(p);
    if policy.allows(n, s.len()) {
        let v = padic_order(p, &mhs_eval(n, s))?;
        w.valuation = v.finite();
        w.check = Some(CheckKind::Recomputed);
    } else {
        w.valuation = Some(-(s.weight() as i64));
        w.check = Some(CheckKind::Structural);
    }
    Ok(Some(w))
}

/// `H_n(s) < 1` from the upward-rounded evaluation, when it holds.
pub fn less_than_one_witness(n: u64, s: &Composition) -> Option<NonIntegralityWitness> {
    if n < s.len() as u64 {
        return None;
    }
    let upper = mhs_upper_eval(n, s).to_rational();
    if upper >= 1u64 {
        return None;
    }
    let mut w = NonIntegralityWitness::base(n, s, SumKind::Ordinary, WitnessMethod::LessThanOne);
    w.upper_bound = Some(upper.to_string());
    Some(w)
}

/// The exact value, when it is not an integer.
pub fn exact_witness(n: u64, s: &Composition, kind: SumKind) -> Option<NonIntegralityWitness> {
    let value = match kind {
        SumKind::Ordinary => mhs_eval(n, s),
        SumKind::Star => mhs_star_eval(n, s),
    };
    if value.is_integer() {
        return None;
    }
    let mut w = NonIntegralityWitness::base(n, s, kind, WitnessMethod::Exact);
    w.value = Some(value.to_string());
    Some(w)
}
