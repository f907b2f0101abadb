mod common;

use common::*;
use mhs_core::exact_arith::{parse_decimal_upper, DyadicUpper};
use mhs_core::mhs::{mhs_eval, mhs_upper_eval_with, parse_composition, Composition, ScaledCoefficients};
use mhs_core::primes::{in_a_r, is_prime_u64};
use mhs_core::tables::TableData;
use mhs_core::{PrimeSieve, Rational};
use proptest::prelude::*;

#[test]
fn brute_force_equivalence() {
    assert_eq!(oracle_equivalence(7, 300), 0);
}

#[test]
fn domination_is_monotone() {
    assert_eq!(domination_monotonicity(11, 200), 0);
}

#[test]
fn valuation_laws_hold() {
    assert_eq!(valuation_laws(13, 10_000), 0);
}

#[test]
fn s1_bounds_give_negative_order() {
    let sieve = PrimeSieve::new(1000);
    let (checked, failures) = s1_bound_guarantee(60, &sieve);
    assert!(checked > 10_000);
    assert_eq!(failures, 0);
}

#[test]
fn exclusion_covers() {
    let tables = TableData::builtin().unwrap();
    assert_eq!(cover_failures(&tables, 2..=10), Vec::<usize>::new());
}

#[test]
fn window_membership_matches_definition() {
    // n ∈ A_r iff rp <= n < (r+1)p for some prime p
    let sieve = PrimeSieve::new(5000);
    for r in 1..=6u64 {
        for n in 1..=600u64 {
            let direct = (2..=n).any(|p| is_prime_u64(p) && r * p <= n && n < (r + 1) * p);
            assert_eq!(in_a_r(n, r, &sieve).unwrap(), direct, "n = {n}, r = {r}");
        }
    }
}

fn composition_strategy() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..=4, 1..=5)
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn composition_text_round_trips(s in composition_strategy()) {
        let c = Composition::new(s.clone()).unwrap();
        let parsed = parse_composition(&c.to_string()).unwrap();
        prop_assert_eq!(parsed.exponents(), &s[..]);
        prop_assert_eq!(parse_composition(&c.to_compact_string()).unwrap(), c);
    }

    #[test]
    fn rational_text_round_trips(a in -10_000i64..10_000, b in 1i64..10_000) {
        let q = Rational::from_ratio(a, b).unwrap();
        let again: Rational = q.to_string().parse().unwrap();
        prop_assert_eq!(&again, &q);
        prop_assert_eq!(again.to_string(), q.to_string());
    }

    #[test]
    fn upper_eval_is_a_tight_upper_bound(n in 1u64..40, s in composition_strategy()) {
        let c = Composition::new(s).unwrap();
        let exact = mhs_eval(n, &c);
        let upper = mhs_upper_eval_with(n, &c, 64).to_rational();
        prop_assert!(upper >= exact);
        let slack = Rational::from_ratio(1, 1 << 50).unwrap();
        prop_assert!(upper <= &exact + &slack);
    }

    #[test]
    fn first_exponent_split(n in 3u64..30, tail in prop::collection::vec(1u32..=3, 1..=3), s1 in 1u32..6) {
        prop_assume!(n > tail.len() as u64 + 1);
        let c = ScaledCoefficients::new(n, &tail).unwrap();
        let direct = mhs_eval(n, &Composition::with_first(s1, &tail).unwrap());
        prop_assert_eq!(c.eval_with_first(s1), direct);
    }

    #[test]
    fn dyadic_ops_round_up(a in 1u64..1_000_000, b in 1u64..1_000_000, c in 1u64..1_000) {
        let qa = Rational::from_ratio(a as i64, b as i64).unwrap();
        let qc = Rational::from_ratio(1, c as i64).unwrap();
        let da = DyadicUpper::from_rational_up(&qa, 32).unwrap();
        let dc = DyadicUpper::from_rational_up(&qc, 32).unwrap();
        let (xa, xc) = (da.to_rational(), dc.to_rational());
        prop_assert!(xa >= qa && xc >= qc);
        // each op rounds its own exact result upward
        prop_assert!(da.add(&dc).to_rational() >= &xa + &xc);
        prop_assert!(da.mul(&dc).to_rational() >= &xa * &xc);
        prop_assert!(da.div(&dc).unwrap().to_rational() >= xa.checked_div(&xc).unwrap());
    }

    #[test]
    fn decimal_upper_is_not_below(int in 0u64..1000, frac in 0u64..1_000_000_000) {
        let text = format!("{int}.{frac:09}");
        let q = parse_decimal_upper(&text).unwrap();
        let exact = Rational::from_ratio((int * 1_000_000_000 + frac) as i64, 1_000_000_000).unwrap();
        prop_assert_eq!(q, exact);
    }
}
