//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use mhs_core::bounds::{applicable_bound, compute_m, compute_m_prime, BoundVariant};
use mhs_core::exact_arith::padic_order;
use mhs_core::mhs::{mhs_eval, mhs_star_eval, Composition, ScaledCoefficients};
use mhs_core::order::{dominates, exclusion_cover_check};
use mhs_core::tables::TableData;
use mhs_core::{PrimeSieve, Rational};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Published `m_r`, from the ratios `m_r / r`.
pub fn tabled_m_r(r: u64) -> u64 {
    let ratio = match r {
        1 => 2,
        2..=3 => 11,
        4..=5 => 29,
        6..=7 => 37,
        8 => 53,
        9..=13 => 127,
        14..=16 => 149,
        17 => 211,
        18..=20 => 223,
        21..=22 => 307,
        23..=29 => 331,
        30..=39 => 541,
        40..=69 => 1361,
        _ => panic!("no tabled value for r = {r}"),
    };
    ratio * r
}

/// Sum over every index tuple, one term at a time.
pub fn brute_mhs(n: u64, s: &[u32], star: bool) -> BigRational {
    fn go(start: u64, n: u64, s: &[u32], star: bool, acc: &BigRational, out: &mut BigRational) {
        let Some((&e, rest)) = s.split_first() else {
            *out += acc;
            return;
        };
        for k in start..=n {
            let term = acc / BigRational::from_integer(BigInt::from(k).pow(e));
            go(if star { k } else { k + 1 }, n, rest, star, &term, out);
        }
    }
    let mut out = BigRational::zero();
    go(1, n, s, star, &BigRational::one(), &mut out);
    out
}

pub fn same(a: &Rational, b: &BigRational) -> bool {
    a.numer() == b.numer() && a.denom() == b.denom()
}

/// `ν_p` of a nonzero `num/den` by trial division on machine integers.
pub fn nu_oracle(p: i128, num: i128, den: i128) -> i64 {
    let count = |mut x: i128| {
        let mut v = 0;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    };
    count(num) - count(den)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// (a) `mhs_eval` and `mhs_star_eval` against brute force on `n_cases`
/// random `(n, s)` with `n <= 30`, `r <= 4`, exponents `<= 3`, plus every
/// case with `n <= 8`. Returns the number of mismatches.
pub fn oracle_equivalence(seed: u64, n_cases: usize) -> usize {
    let mut cases = Vec::new();
    for n in 1..=8u64 {
        for r in 1..=4usize {
            for code in 0..3u32.pow(r as u32) {
                let s: Vec<u32> = (0..r).map(|i| code / 3u32.pow(i as u32) % 3 + 1).collect();
                cases.push((n, s));
            }
        }
    }
    let mut g = rng(seed);
    for _ in 0..n_cases {
        let n = g.gen_range(1..=30);
        let r = g.gen_range(1..=4);
        let s = (0..r).map(|_| g.gen_range(1..=3)).collect();
        cases.push((n, s));
    }
    cases
        .iter()
        .filter(|(n, s)| {
            let c = Composition::new(s.clone()).unwrap();
            !same(&mhs_eval(*n, &c), &brute_mhs(*n, s, false))
                || !same(&mhs_star_eval(*n, &c), &brute_mhs(*n, s, true))
        })
        .count()
}

/// (b) `H_n(s) <= H_n(t)` on `pairs` random pairs with `s >= t`.
pub fn domination_monotonicity(seed: u64, pairs: usize) -> usize {
    let mut g = rng(seed);
    let mut failures = 0;
    let mut found = 0;
    while found < pairs {
        let r = g.gen_range(1..=5);
        let t: Vec<u32> = (0..r).map(|_| g.gen_range(1..=3)).collect();
        // nudge t upward on a suffix and downward on a prefix
        let l = g.gen_range(0..r);
        let s: Vec<u32> = t
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                if i < l {
                    x - g.gen_range(0..x)
                } else {
                    x + g.gen_range(0..=2)
                }
            })
            .collect();
        let (sc, tc) = (Composition::new(s).unwrap(), Composition::new(t).unwrap());
        if dominates(&sc, &tc).unwrap().is_none() {
            continue;
        }
        found += 1;
        let n = g.gen_range(r as u64..=40);
        if mhs_eval(n, &sc) > mhs_eval(n, &tc) {
            failures += 1;
        }
    }
    failures
}

/// (c) valuation laws on `count` random rationals with small parts.
pub fn valuation_laws(seed: u64, count: usize) -> usize {
    let mut g = rng(seed);
    let primes = [2u64, 3, 5, 7, 11, 13];
    let mut failures = 0;
    let draw = |g: &mut ChaCha8Rng| loop {
        let a: i64 = g.gen_range(-1_000_000..=1_000_000);
        let b: i64 = g.gen_range(1..=1_000_000);
        if a != 0 {
            return (a, b);
        }
    };
    for _ in 0..count {
        let (a, b) = draw(&mut g);
        let (c, d) = draw(&mut g);
        let p = primes[g.gen_range(0..primes.len())];
        let x = Rational::from_ratio(a, b).unwrap();
        let y = Rational::from_ratio(c, d).unwrap();
        let nu = |q: &Rational| padic_order(p, q).unwrap().finite();
        let vx = nu(&x).unwrap();
        let vy = nu(&y).unwrap();
        let mut ok = vx == nu_oracle(p as i128, a as i128, b as i128);
        ok &= nu(&(&x * &y)) == Some(vx + vy);
        ok &= nu(&x.recip().unwrap()) == Some(-vx);
        let sum = &x + &y;
        if !sum.is_zero() {
            let vs = nu(&sum).unwrap();
            ok &= vs >= vx.min(vy);
            if vx != vy {
                ok &= vs == vx.min(vy);
            }
        } else {
            ok &= padic_order(p, &sum).unwrap().finite().is_none();
        }
        if !ok {
            failures += 1;
        }
    }
    failures
}

fn tails(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=max).map(move |e| {
                    let mut u = t.clone();
                    u.push(e);
                    u
                })
            })
            .collect();
    }
    out
}

/// (d) for every `n <= n_max`, `2 <= r <= 4`, tail entries `<= 3` and
/// `s_1` in `(bound, bound + 3]`, the bound's prime gives a negative order
/// (for `r = n`, the single term is not an integer). Checks `M`, and `M'`
/// where it applies. Returns `(checked, failures)`.
pub fn s1_bound_guarantee(n_max: u64, sieve: &PrimeSieve) -> (usize, usize) {
    let mut checked = 0;
    let mut failures = 0;
    for r in 2..=4usize {
        for tail in tails(r - 1, 3) {
            for n in r as u64..=n_max {
                let mut bounds = vec![compute_m(n, &tail, sieve).unwrap()];
                if let Ok(b) = compute_m_prime(n, &tail, sieve) {
                    if b.value < bounds[0].value {
                        failures += 1;
                    }
                    bounds.push(b);
                }
                let applicable = applicable_bound(n, &tail, sieve).unwrap();
                let coeffs = (n > r as u64).then(|| ScaledCoefficients::new(n, &tail).unwrap());
                for b in bounds.iter().chain([&applicable]) {
                    let lo = b.value.max(0) as u32;
                    for s1 in lo + 1..=lo + 3 {
                        checked += 1;
                        let value = match &coeffs {
                            Some(c) => c.eval_with_first(s1),
                            None => {
                                mhs_eval(n, &Composition::with_first(s1, &tail).unwrap())
                            }
                        };
                        let ok = match (b.variant, b.p) {
                            (BoundVariant::Trivial, _) => !value.is_integer(),
                            (_, Some(p)) => padic_order(p, &value).unwrap().is_negative(),
                            (_, None) => false,
                        };
                        if !ok {
                            failures += 1;
                        }
                    }
                }
            }
        }
    }
    (checked, failures)
}

/// (e) the exclusion cover for each length in `rs` at cap = max table
/// exponent + 1. Returns the lengths that fail.
pub fn cover_failures(tables: &TableData, rs: std::ops::RangeInclusive<usize>) -> Vec<usize> {
    rs.filter(|&r| {
        let cap = tables.max_exponent(r) + 1;
        !exclusion_cover_check(r, &tables.optimal_set(r), &tables.exclusion_tails(r), cap).unwrap()
    })
    .collect()
}
