use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::report::VerificationReport;
use super::witness::{star_witness, NonIntegralityWitness};
use crate::bounds::{applicable_bound, remark2_bound, BoundVariant};
use crate::error::{Error, Result};
use crate::exact_arith::format_decimal_upper;
use crate::mhs::{mhs_eval, mhs_star_eval, mhs_upper_eval, Composition, CostPolicy, ScaledCoefficients};
use crate::order::exclusion_cover_report;
use crate::primes::{compute_m_r, in_a_r, primes_in_window, PrimeSieve};
use crate::tables::{ExclusionRow, OptimalRow, TableData};

/// Lengths up to this are swept exhaustively by default.
pub const DEFAULT_EXACT_LIMIT: usize = 6;
/// How many fallback `n` a sampled sweep evaluates per length.
pub const DEFAULT_SAMPLES: usize = 8;
/// `s_1` values checked for the `H_1(s_1) = 1` exception.
const R1_EXPONENTS: u32 = 10;

pub type Progress = Arc<dyn Fn(&str) + Send + Sync>;

/// Which parts of the table verification to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableChecks {
    pub optimal: bool,
    pub cover: bool,
    pub s1_bounds: bool,
    pub remark2: bool,
}

impl Default for TableChecks {
    fn default() -> Self {
        Self {
            optimal: true,
            cover: true,
            s1_bounds: true,
            remark2: true,
        }
    }
}

impl TableChecks {
    pub fn only_optimal() -> Self {
        Self {
            optimal: true,
            cover: false,
            s1_bounds: false,
            remark2: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TheoremOptions {
    /// Lengths `<= exact_limit` evaluate every fallback `n`.
    pub exact_limit: usize,
    /// Fallback `n` evaluated per length above `exact_limit`.
    pub samples: usize,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        Self {
            exact_limit: DEFAULT_EXACT_LIMIT,
            samples: DEFAULT_SAMPLES,
        }
    }
}

/// Shared, read-only state for the verification suites.
pub struct Verifier {
    sieve: PrimeSieve,
    tables: TableData,
    pub policy: CostPolicy,
    pub timings: bool,
    progress: Option<Progress>,
}

enum TableTask<'a> {
    Optimal(usize, usize, &'a OptimalRow),
    Cover(usize),
    S1(usize, usize, &'a ExclusionRow),
    Remark2(usize),
}

fn table_name(r: usize) -> &'static str {
    match r {
        2..=8 => "table1",
        9..=11 => "table2",
        _ => "table3",
    }
}

fn comp_text(s: &[u32]) -> String {
    Composition::new(s.to_vec()).map(|c| c.to_string()).unwrap_or_default()
}

impl Verifier {
    pub fn new(sieve: PrimeSieve, tables: TableData) -> Self {
        Self {
            sieve,
            tables,
            policy: CostPolicy::default(),
            timings: false,
            progress: None,
        }
    }

    pub fn with_progress(mut self, progress: Progress) -> Self {
        self.progress = Some(progress);
        self
    }

    pub fn sieve(&self) -> &PrimeSieve {
        &self.sieve
    }

    pub fn tables(&self) -> &TableData {
        &self.tables
    }

    fn note(&self, msg: &str) {
        if let Some(p) = &self.progress {
            p(msg);
        }
    }

    fn timed(&self, f: impl FnOnce() -> Result<VerificationReport>) -> Result<VerificationReport> {
        let start = Instant::now();
        let mut report = f()?;
        if self.timings {
            report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
        }
        Ok(report)
    }

    fn thresholds(&self, rs: impl Iterator<Item = usize>) -> Result<BTreeMap<usize, u64>> {
        rs.map(|r| Ok((r, compute_m_r(r as u64, &self.sieve)?)))
            .collect()
    }

    /// Table checks for lengths in `rs` (within `2..=29`):
    /// optimal-set bounds at `n = m_r` (including the all-ones bounds for
    /// `r = 19..24`), the exclusion cover, the `s_1` bound column, and the
    /// size estimate for `r = 25..29`.
    pub fn verify_tables(
        &self,
        rs: RangeInclusive<usize>,
        checks: TableChecks,
    ) -> Result<Vec<VerificationReport>> {
        if *rs.start() < 2 || *rs.end() > 29 {
            return Err(Error::InvalidArgument(format!(
                "table lengths run over 2..29, got {}..{}",
                rs.start(),
                rs.end()
            )));
        }
        let m = self.thresholds(rs.clone())?;
        let mut tasks = Vec::new();
        for r in rs {
            if checks.optimal {
                for (i, row) in self.tables.optimal_rows(r).into_iter().enumerate() {
                    tasks.push(TableTask::Optimal(r, i + 1, row));
                }
            }
            if r <= 18 {
                if checks.cover {
                    tasks.push(TableTask::Cover(r));
                }
                if checks.s1_bounds {
                    for (i, row) in self.tables.exclusion_rows(r).into_iter().enumerate() {
                        tasks.push(TableTask::S1(r, i + 1, row));
                    }
                }
            }
            if r >= 25 && checks.remark2 {
                tasks.push(TableTask::Remark2(r));
            }
        }
        self.note(&format!("verify-tables: {} tasks", tasks.len()));
        tasks
            .par_iter()
            .map(|t| self.timed(|| self.table_task(t, &m)))
            .collect()
    }

    fn table_task(&self, task: &TableTask<'_>, m: &BTreeMap<usize, u64>) -> Result<VerificationReport> {
        let report = match *task {
            TableTask::Optimal(r, i, row) => self.check_optimal(r, i, row, m[&r]),
            TableTask::Cover(r) => self.check_cover(r)?,
            TableTask::S1(r, i, row) => self.check_s1(r, i, row, m[&r])?,
            TableTask::Remark2(r) => {
                let n = m[&r];
                let value = remark2_bound(n, r as u64)?;
                VerificationReport::new(format!("thm2.r{r}.remark2"), json!({"r": r, "n": n}))
                    .decide(
                        value < 1u64,
                        format!("(ln {n} + 1)^{r}/{r}! is not certified below 1"),
                        json!({"upper": format_decimal_upper(&value, 12)}),
                    )
            }
        };
        self.note(&format!("done {}", report.claim));
        Ok(report)
    }

    fn check_optimal(&self, r: usize, i: usize, row: &OptimalRow, n: u64) -> VerificationReport {
        let claim = if r <= 18 {
            format!("{}.r{r}.optimal.{i}", table_name(r))
        } else {
            format!("thm2.r{r}.ones")
        };
        let upper = mhs_upper_eval(n, &row.composition);
        let exact = upper.to_rational();
        VerificationReport::new(
            claim,
            json!({"r": r, "n": n, "composition": row.composition.to_string(), "bound": row.bound_text}),
        )
        .decide(
            upper.lt_rational(&row.bound),
            format!(
                "H_{n}({}) < {} not certified (line {})",
                row.composition, row.bound_text, row.line
            ),
            json!({
                "upper": format_decimal_upper(&exact, 12),
                "upper_exact": exact.to_string(),
                "precision_bits": upper.precision(),
            }),
        )
    }

    fn check_cover(&self, r: usize) -> Result<VerificationReport> {
        let cap = self.tables.max_exponent(r) + 1;
        let report = exclusion_cover_report(
            r,
            &self.tables.optimal_set(r),
            &self.tables.exclusion_tails(r),
            cap,
        )?;
        let render = |v: &[Vec<u32>]| v.iter().map(|t| comp_text(t)).collect::<Vec<_>>();
        Ok(VerificationReport::new(
            format!("{}.r{r}.cover", table_name(r)),
            json!({"r": r, "cap": cap}),
        )
        .decide(
            report.passed,
            format!("tails neither dominated nor excluded: {:?}", render(&report.missing)),
            json!({
                "uncovered": render(&report.uncovered),
                "missing": render(&report.missing),
                "visited": report.visited,
            }),
        ))
    }

    fn check_s1(&self, r: usize, i: usize, row: &ExclusionRow, m: u64) -> Result<VerificationReport> {
        let mut best: Option<(i64, u64, BoundVariant, Option<u64>)> = None;
        // the proof only needs n outside A_r; tracked separately for the record
        let mut outside: Option<(i64, u64)> = None;
        for n in r as u64..m {
            let b = applicable_bound(n, &row.tail, &self.sieve)?;
            if best.is_none_or(|(v, ..)| b.value > v) {
                best = Some((b.value, n, b.variant, b.p));
            }
            if !in_a_r(n, r as u64, &self.sieve)? && outside.is_none_or(|(v, _)| b.value > v) {
                outside = Some((b.value, n));
            }
        }
        let params = json!({"r": r, "row": row.label(), "table_bound": row.s1_bound, "n_range": [r, m]});
        let claim = format!("{}.r{r}.exclusion.{i}.s1bound", table_name(r));
        let Some((v, n, variant, p)) = best else {
            return Ok(VerificationReport::new(claim, params).skipped("empty n range"));
        };
        Ok(VerificationReport::new(claim, params).decide(
            v <= row.s1_bound as i64,
            format!(
                "computed bound {v} at n = {n} exceeds {} (line {})",
                row.s1_bound, row.line
            ),
            json!({
                "max": v,
                "argmax_n": n,
                "variant": variant,
                "prime": p,
                "max_outside_a_r": outside.map(|x| x.0),
                "argmax_outside_a_r": outside.map(|x| x.1),
            }),
        ))
    }

    /// Non-integrality of `H_n(s)` for lengths `rs` (within `1..=18`).
    /// Every `n ∈ [r, m_r)` with a window prime above `r` is discharged by
    /// that prime; the rest are evaluated exactly for every exclusion row
    /// and `s_1` up to its bound (or the computed `M`/`M'`, if larger).
    /// Length 1 checks the `H_1(s_1) = 1` exception.
    pub fn verify_theorem_main(
        &self,
        rs: RangeInclusive<usize>,
        options: TheoremOptions,
    ) -> Result<Vec<VerificationReport>> {
        if *rs.start() < 1 || *rs.end() > 18 {
            return Err(Error::InvalidArgument(format!(
                "theorem lengths run over 1..18, got {}..{}",
                rs.start(),
                rs.end()
            )));
        }
        rs.map(|r| {
            self.note(&format!("verify-theorem: r = {r}"));
            self.timed(|| {
                if r == 1 {
                    self.theorem_r1()
                } else {
                    self.theorem_for_length(r, options)
                }
            })
        })
        .collect()
    }

    fn theorem_r1(&self) -> Result<VerificationReport> {
        let mut exceptions = Vec::new();
        for s1 in 1..=R1_EXPONENTS {
            let s = Composition::new(vec![s1])?;
            if mhs_eval(1, &s).is_integer() {
                exceptions.push(json!({"n": 1, "s": s.to_string()}));
            }
        }
        let ok = exceptions.len() == R1_EXPONENTS as usize;
        Ok(VerificationReport::new(
            "thm2.exceptions.r1",
            json!({"r": 1, "n": 1, "s1_max": R1_EXPONENTS}),
        )
        .decide(
            ok,
            "H_1(s_1) was not 1 for some s_1",
            json!({"exceptions": exceptions}),
        ))
    }

    fn theorem_for_length(&self, r: usize, options: TheoremOptions) -> Result<VerificationReport> {
        let m = compute_m_r(r as u64, &self.sieve)?;
        let ns: Vec<u64> = (r as u64..m).collect();
        let window: Vec<Option<u64>> = ns
            .iter()
            .map(|&n| {
                let w = primes_in_window(n, r as u64, &self.sieve)?;
                Ok(w.primes_inside.iter().rev().copied().find(|&p| p > r as u64))
            })
            .collect::<Result<_>>()?;
        let fallback: Vec<u64> = ns
            .iter()
            .zip(&window)
            .filter(|(_, p)| p.is_none())
            .map(|(&n, _)| n)
            .collect();
        let exhaustive = r <= options.exact_limit;
        let checked: Vec<u64> = if exhaustive {
            fallback.clone()
        } else {
            sample(&fallback, options.samples)
        };
        let rows = self.tables.exclusion_rows(r);
        let results: Vec<(u64, SweepResult)> = checked
            .par_iter()
            .map(|&n| {
                let found = integers_among(n, &rows, &self.sieve)?;
                self.note(&format!("r = {r}: n = {n} checked"));
                Ok((n, found))
            })
            .collect::<Result<_>>()?;
        let evaluations: usize = results.iter().map(|x| x.1 .0).sum();
        let extended: Vec<u64> = results
            .iter()
            .filter(|x| x.1 .1 > 0)
            .map(|x| x.0)
            .collect();
        let found: Vec<(u64, Composition)> = results
            .into_iter()
            .flat_map(|(n, (_, _, v))| v.into_iter().map(move |s| (n, s)))
            .collect();
        let known = |n: u64, s: &Composition| n == 3 && s.exponents() == [1, 1];
        let unexpected: Vec<_> = found.iter().filter(|(n, s)| !known(*n, s)).collect();
        let expected_missing = exhaustive && r == 2 && !found.iter().any(|(n, s)| known(*n, s));
        let render = |v: &[(u64, Composition)]| {
            v.iter()
                .map(|(n, s)| json!({"n": n, "s": s.to_string()}))
                .collect::<Vec<_>>()
        };
        let discharged: usize = window.iter().filter(|p| p.is_some()).count();
        let witness = json!({
            "m_r": m,
            "window_discharged": discharged,
            "fallback_n": fallback,
            "checked_n": checked,
            "evaluations": evaluations,
            "beyond_table_bound_n": extended,
            "exceptions": render(&found),
        });
        let mut params = json!({
            "r": r,
            "n_range": [r, m],
            "mode": if exhaustive { "exhaustive" } else { "sampled" },
        });
        if !exhaustive {
            params["samples"] = json!(options.samples);
        }
        let reason = if expected_missing {
            "the exception H_3(1,1) = 1 was not found".to_string()
        } else {
            format!(
                "integers outside the known exceptions: {:?}",
                unexpected
                    .iter()
                    .map(|(n, s)| format!("H_{n}({s})"))
                    .collect::<Vec<_>>()
            )
        };
        Ok(VerificationReport::new(format!("thm2.exhaustive.r{r}"), params).decide(
            unexpected.is_empty() && !expected_missing,
            reason,
            witness,
        ))
    }

    /// Every `(n, s)` with `2 <= n <= n_max`, `l(s) <= min(r_max, n)` and
    /// `|s| <= weight_cap`, paired with its star witness and, where exact
    /// evaluation is within the cost policy, whether `H*_n(s)` is an integer.
    pub fn star_cases(
        &self,
        n_max: u64,
        r_max: usize,
        weight_cap: u32,
    ) -> Result<Vec<(NonIntegralityWitness, Option<bool>)>> {
        let cases: Vec<(u64, Composition)> = (2..=n_max)
            .flat_map(|n| {
                compositions_up_to(r_max.min(n as usize), weight_cap)
                    .into_iter()
                    .map(move |s| (n, s))
            })
            .collect();
        cases
            .par_iter()
            .map(|(n, s)| {
                let w = star_witness(*n, s, &self.sieve, &self.policy)?;
                let integral = self
                    .policy
                    .allows(*n, s.len())
                    .then(|| mhs_star_eval(*n, s).is_integer());
                Ok((w, integral))
            })
            .collect()
    }

    /// Non-integrality of `H*_n(s)` over the box `n <= n_max`, `l(s) <= r_max`,
    /// `|s| <= weight_cap`, with `n = 1` reported as the `H*_1(s_1) = 1`
    /// exception.
    pub fn verify_theorem_star(
        &self,
        n_max: u64,
        r_max: usize,
        weight_cap: u32,
    ) -> Result<Vec<VerificationReport>> {
        if r_max == 0 || weight_cap == 0 || n_max == 0 {
            return Err(Error::InvalidArgument("n_max, r_max and weight_cap must be positive".into()));
        }
        self.sieve.check(n_max)?;
        let params = json!({"n_max": n_max, "r_max": r_max, "weight_cap": weight_cap});
        let mut reports = Vec::new();
        reports.push(self.timed(|| {
            let mut exceptions = Vec::new();
            let mut ok = true;
            for s1 in 1..=weight_cap {
                let s = Composition::new(vec![s1])?;
                ok &= mhs_star_eval(1, &s) == 1u64;
                exceptions.push(json!({"n": 1, "s": s.to_string()}));
            }
            Ok(VerificationReport::new("thm1.exceptions", params.clone()).decide(
                ok,
                "H*_1(s_1) was not 1 for some s_1",
                json!({"exceptions": exceptions}),
            ))
        })?);
        if n_max >= 2 {
            reports.push(self.timed(|| {
                let cases = self.star_cases(n_max, r_max, weight_cap)?;
                self.note(&format!("verify-star: {} cases", cases.len()));
                let bad: Vec<String> = cases
                    .iter()
                    .filter(|(w, integral)| !w.certifies() || *integral == Some(true))
                    .map(|(w, _)| format!("H*_{}({})", w.n, w.composition))
                    .collect();
                let witnesses: Vec<Value> = cases
                    .iter()
                    .map(|(w, _)| {
                        json!([w.n, w.composition.to_string(), w.prime, w.valuation, w.check])
                    })
                    .collect();
                let exact = cases.iter().filter(|(_, i)| i.is_some()).count();
                Ok(VerificationReport::new("thm1.star", params.clone()).decide(
                    bad.is_empty(),
                    format!("cases without a valid witness: {bad:?}"),
                    json!({
                        "cases": cases.len(),
                        "exact_checked": exact,
                        "columns": ["n", "s", "p", "valuation", "check"],
                        "witnesses": witnesses,
                    }),
                ))
            })?);
        }
        Ok(reports)
    }
}

/// Evaluation count, rows needing more than the table bound, integer values.
type SweepResult = (usize, usize, Vec<Composition>);

/// Exact evaluations of `H_n(s_1, tail)` for every row and `1 <= s_1 <=`
/// the larger of the row's bound and the computed `M`/`M'` at `n`, so every
/// larger `s_1` has a negative valuation.
fn integers_among(n: u64, rows: &[&ExclusionRow], sieve: &PrimeSieve) -> Result<SweepResult> {
    let mut count = 0;
    let mut extended = 0;
    let mut found = Vec::new();
    for row in rows {
        let r = row.tail.len() + 1;
        let computed = applicable_bound(n, &row.tail, sieve)?.value.max(0) as u32;
        if computed > row.s1_bound {
            extended += 1;
        }
        let top = row.s1_bound.max(computed);
        let flags = if n > r as u64 {
            ScaledCoefficients::new(n, &row.tail)?.integrality_up_to(top)
        } else {
            (1..=top)
                .map(|s1| mhs_eval(n, &row.with_first(s1)).is_integer())
                .collect()
        };
        count += flags.len();
        for (s1, integral) in (1..=top).zip(flags) {
            if integral {
                found.push(row.with_first(s1));
            }
        }
    }
    Ok((count, extended, found))
}

/// Up to `k` entries spread evenly over `v`, always keeping the first.
fn sample(v: &[u64], k: usize) -> Vec<u64> {
    if v.len() <= k {
        return v.to_vec();
    }
    let mut out: Vec<u64> = (0..k).map(|i| v[i * v.len() / k]).collect();
    out.dedup();
    out
}

/// All compositions with length `1..=r_max` and weight `<= weight_cap`.
pub fn compositions_up_to(r_max: usize, weight_cap: u32) -> Vec<Composition> {
    fn go(prefix: &mut Vec<u32>, left: usize, budget: u32, out: &mut Vec<Composition>) {
        if left == 0 {
            out.push(Composition::new(prefix.clone()).expect("entries are positive"));
            return;
        }
        // leave at least 1 for each later entry
        let room = budget.saturating_sub(left as u32 - 1);
        for e in 1..=room {
            prefix.push(e);
            go(prefix, left - 1, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for r in 1..=r_max {
        go(&mut Vec::new(), r, weight_cap, &mut out);
    }
    out
}
