//! The domination order on compositions of equal length and the exclusion
//! sets it leaves behind.
//!
//! `s >= t` when `|s| >= |t|` and, for some split `0 <= l <= r-1`,
//! `s_i <= t_i` for `i <= l` and `s_i >= t_i` for `i > l`. Dominating tuples
//! have termwise smaller reciprocals, hence `H_n(s) <= H_n(t)` for every `n`.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mhs::Composition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DominationWitness {
    /// Number of leading positions with `s_i <= t_i`.
    pub l: usize,
    pub weight_ok: bool,
}

fn witnesses(s: &[u32], t: &[u32]) -> impl Iterator<Item = usize> {
    let r = s.len();
    let ws: u64 = s.iter().map(|&x| x as u64).sum();
    let wt: u64 = t.iter().map(|&x| x as u64).sum();
    // prefix_ok[l]: s_i <= t_i for the first l positions
    // suffix_ok[l]: s_i >= t_i for positions l..r
    let mut prefix_ok = vec![true; r + 1];
    for i in 0..r {
        prefix_ok[i + 1] = prefix_ok[i] && s[i] <= t[i];
    }
    let mut suffix_ok = vec![true; r + 1];
    for i in (0..r).rev() {
        suffix_ok[i] = suffix_ok[i + 1] && s[i] >= t[i];
    }
    (0..r).filter(move |&l| ws >= wt && prefix_ok[l] && suffix_ok[l])
}

fn check_len(s: &[u32], t: &[u32]) -> Result<()> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch {
            left: s.len(),
            right: t.len(),
        });
    }
    Ok(())
}

/// The smallest split `l` witnessing `s >= t`, if any.
pub fn dominates(s: &Composition, t: &Composition) -> Result<Option<DominationWitness>> {
    dominates_slices(s.exponents(), t.exponents())
}

pub fn dominates_slices(s: &[u32], t: &[u32]) -> Result<Option<DominationWitness>> {
    check_len(s, t)?;
    Ok(witnesses(s, t).next().map(|l| DominationWitness { l, weight_ok: true }))
}

/// Every split `l` witnessing `s >= t`, in increasing order.
pub fn all_witnesses(s: &Composition, t: &Composition) -> Result<Vec<usize>> {
    check_len(s.exponents(), t.exponents())?;
    Ok(witnesses(s.exponents(), t.exponents()).collect())
}

/// `true` iff `(1, tail)` is dominated by no optimal tuple, so the tail has
/// to be checked exhaustively.
pub fn is_excluded_tail(tail: &[u32], optimal: &[Composition]) -> Result<bool> {
    let mut probe = Vec::with_capacity(tail.len() + 1);
    probe.push(1);
    probe.extend_from_slice(tail);
    for o in optimal {
        if dominates_slices(&probe, o.exponents())?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Tails covered by the optimal set: some pointwise-smaller tail `y <= x`
/// has `(1, y)` dominated by an optimal tuple. Then for every `s_1`,
/// `H_n(s_1, x) <= H_n(1, x) <= H_n(1, y) <= H_n(o)`, and the covered tails
/// form an up-set in the pointwise order.
pub struct CoverOracle<'a> {
    optimal: &'a [Composition],
    memo: HashMap<Vec<u32>, bool>,
}

impl<'a> CoverOracle<'a> {
    pub fn new(optimal: &'a [Composition]) -> Self {
        Self {
            optimal,
            memo: HashMap::new(),
        }
    }

    pub fn directly_dominated(&self, tail: &[u32]) -> Result<bool> {
        Ok(!is_excluded_tail(tail, self.optimal)?)
    }

    pub fn covered(&mut self, tail: &[u32]) -> Result<bool> {
        if let Some(&v) = self.memo.get(tail) {
            return Ok(v);
        }
        let mut v = self.directly_dominated(tail)?;
        if !v {
            let mut lower = tail.to_vec();
            for i in 0..tail.len() {
                if tail[i] > 1 {
                    lower[i] -= 1;
                    let hit = self.covered(&lower)?;
                    lower[i] += 1;
                    if hit {
                        v = true;
                        break;
                    }
                }
            }
        }
        self.memo.insert(tail.to_vec(), v);
        Ok(v)
    }
}

/// Outcome of [`exclusion_cover_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub r: usize,
    pub cap: u32,
    pub passed: bool,
    /// Uncovered tails (entries `<= cap`) reached from `(1, ..., 1)`.
    pub uncovered: Vec<Vec<u32>>,
    /// Uncovered tails that are not exclusion rows.
    pub missing: Vec<Vec<u32>>,
    pub visited: usize,
}

/// Certifies that every tail `(s_2, ..., s_r)` with entries `<= cap` is
/// covered by the optimal set or is one of the exclusion tails.
///
/// Uncovered tails form a down-set, so they are all reachable from
/// `(1, ..., 1)` through uncovered tails; the search only expands those.
pub fn exclusion_cover_report(
    r: usize,
    optimal: &[Composition],
    exclusion_tails: &[Vec<u32>],
    cap: u32,
) -> Result<CoverReport> {
    if r < 2 {
        return Err(Error::InvalidArgument("exclusion sets need r >= 2".into()));
    }
    for o in optimal {
        if o.len() != r {
            return Err(Error::LengthMismatch {
                left: o.len(),
                right: r,
            });
        }
    }
    for t in exclusion_tails {
        if t.len() != r - 1 {
            return Err(Error::LengthMismatch {
                left: t.len() + 1,
                right: r,
            });
        }
    }
    let excluded: HashSet<&[u32]> = exclusion_tails.iter().map(|t| t.as_slice()).collect();
    let mut oracle = CoverOracle::new(optimal);
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut stack = vec![vec![1u32; r - 1]];
    let mut uncovered = Vec::new();
    let mut missing = Vec::new();
    while let Some(x) = stack.pop() {
        if !seen.insert(x.clone()) {
            continue;
        }
        if oracle.covered(&x)? {
            continue;
        }
        if !excluded.contains(x.as_slice()) {
            missing.push(x.clone());
        }
        for i in 0..x.len() {
            if x[i] < cap {
                let mut y = x.clone();
                y[i] += 1;
                stack.push(y);
            }
        }
        uncovered.push(x);
    }
    uncovered.sort();
    missing.sort();
    Ok(CoverReport {
        r,
        cap,
        passed: missing.is_empty(),
        uncovered,
        missing,
        visited: seen.len(),
    })
}

pub fn exclusion_cover_check(
    r: usize,
    optimal: &[Composition],
    exclusion_tails: &[Vec<u32>],
    cap: u32,
) -> Result<bool> {
    Ok(exclusion_cover_report(r, optimal, exclusion_tails, cap)?.passed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mhs::parse_composition;

    fn c(text: &str) -> Composition {
        parse_composition(text).unwrap()
    }

    fn table1_r5() -> (Vec<Composition>, Vec<Vec<u32>>) {
        let opt = vec![c("{1}^4,2"), c("1,2,2,1,1"), c("1,4,{1}^3")];
        let excl = vec![
            vec![3, 1, 1, 1],
            vec![2, 1, 1, 1],
            vec![1, 2, 1, 1],
            vec![1, 1, 2, 1],
            vec![1, 1, 1, 1],
        ];
        (opt, excl)
    }

    #[test]
    fn witness_examples() {
        let w = dominates(&c("1,1,3,1,1"), &c("1,2,2,1,1")).unwrap().unwrap();
        assert_eq!(w.l, 2);
        assert_eq!(dominates(&c("2,2"), &c("1,2")).unwrap().unwrap().l, 0);
        assert_eq!(dominates(&c("1,2"), &c("2,1")).unwrap().unwrap().l, 1);
        assert_eq!(dominates(&c("2,1"), &c("1,2")).unwrap(), None);
        assert_eq!(all_witnesses(&c("2,2"), &c("2,2")).unwrap(), vec![0, 1]);
    }

    #[test]
    fn weight_is_required() {
        // prefix/suffix pattern holds at l = 1 but the weight drops
        assert_eq!(dominates(&c("1,2,2"), &c("2,2,2")).unwrap(), None);
        assert!(dominates(&c("1,3,2"), &c("2,2,2")).unwrap().is_some());
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            dominates(&c("1,2"), &c("1,2,3")),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn excluded_tails_r5() {
        let (opt, excl) = table1_r5();
        assert!(is_excluded_tail(&[2, 1, 1, 1], &opt).unwrap());
        assert!(!is_excluded_tail(&[4, 1, 1, 1], &opt).unwrap());
        for tail in &excl {
            assert!(is_excluded_tail(tail, &opt).unwrap(), "{tail:?}");
        }
        assert!(!is_excluded_tail(&[2], &[c("1,2")]).unwrap());
    }

    /// Brute force over all tails with entries <= cap: the DFS must agree.
    fn brute_cover(r: usize, opt: &[Composition], excl: &[Vec<u32>], cap: u32) -> bool {
        let mut oracle = CoverOracle::new(opt);
        let mut tail = vec![1u32; r - 1];
        loop {
            if !oracle.covered(&tail).unwrap() && !excl.contains(&tail) {
                return false;
            }
            let mut i = 0;
            loop {
                if i == tail.len() {
                    return true;
                }
                if tail[i] < cap {
                    tail[i] += 1;
                    break;
                }
                tail[i] = 1;
                i += 1;
            }
        }
    }

    #[test]
    fn cover_r5() {
        let (opt, excl) = table1_r5();
        let rep = exclusion_cover_report(5, &opt, &excl, 5).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(brute_cover(5, &opt, &excl, 5));
        // dropping a row must break it
        assert!(!exclusion_cover_check(5, &opt, &excl[1..], 5).unwrap());
        assert!(!brute_cover(5, &opt, &excl[1..], 5));
    }

    #[test]
    fn cover_r2_r3() {
        assert!(exclusion_cover_check(2, &[c("1,2")], &[vec![1]], 4).unwrap());
        let opt3 = [c("1,1,2"), c("1,3,1")];
        let excl3 = [vec![2, 1], vec![1, 1]];
        assert!(exclusion_cover_check(3, &opt3, &excl3, 4).unwrap());
        assert!(brute_cover(3, &opt3, &excl3, 4));
    }

    #[test]
    fn covered_is_up_closed() {
        let (opt, _) = table1_r5();
        let mut oracle = CoverOracle::new(&opt);
        for a in 1..=5u32 {
            for b in 1..=5 {
                for d in 1..=5 {
                    for e in 1..=5 {
                        let x = [a, b, d, e];
                        if oracle.covered(&x).unwrap() {
                            for i in 0..4 {
                                let mut y = x;
                                y[i] += 1;
                                assert!(oracle.covered(&y).unwrap(), "{x:?} -> {y:?}");
                            }
                        }
                    }
                }
            }
        }
    }
}
