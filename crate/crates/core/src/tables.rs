//! Optimal sets, exclusion sets and `s_1` bounds, read from a line-oriented
//! data file:
//!
//! ```text
//! r | kind | composition | bound
//! 5 | optimal | {1}^4,2 | <0.502399297
//! 5 | exclusion | s1,2,{1}^3 | <=3
//! ```
//!
//! The shipped file is embedded at compile time and pinned by SHA-256.

use std::collections::BTreeSet;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact_arith::{parse_decimal_upper, Rational};
use crate::mhs::{parse_composition, Composition};

pub const BUILTIN_TABLES: &str = include_str!("../data/tables_v1.txt");
pub const BUILTIN_SHA256: &str = "d5647d686cc3e12fe46a632eb686d9c507a61e977e87451b49a4e5d48aeeed23";
const HEADER: &str = "# mhs-tables v";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptimalRow {
    pub r: usize,
    pub composition: Composition,
    /// The literal as written, e.g. `0.502399297`.
    pub bound_text: String,
    #[serde(skip)]
    pub bound: Rational,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExclusionRow {
    pub r: usize,
    /// `(s_2, ..., s_r)`
    pub tail: Vec<u32>,
    pub s1_bound: u32,
    pub line: usize,
}

impl ExclusionRow {
    /// `(s_1, tail)` as a composition.
    pub fn with_first(&self, s1: u32) -> Composition {
        Composition::with_first(s1, &self.tail).expect("tail entries are positive")
    }

    /// Rendered as `s1,<tail>`.
    pub fn label(&self) -> String {
        format!("s1,{}", crate::mhs::Composition::new(self.tail.clone()).unwrap())
    }
}

#[derive(Clone, Debug)]
pub struct TableData {
    pub version: u32,
    pub sha256: String,
    pub optimal: Vec<OptimalRow>,
    pub exclusion: Vec<ExclusionRow>,
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl TableData {
    /// The embedded tables; fails if their checksum drifted.
    pub fn builtin() -> Result<Self> {
        let data = Self::parse(BUILTIN_TABLES)?;
        if data.sha256 != BUILTIN_SHA256 {
            return Err(Error::TableData {
                line: 0,
                message: format!(
                    "checksum mismatch: expected {BUILTIN_SHA256}, found {}",
                    data.sha256
                ),
            });
        }
        Ok(data)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut version = None;
        let mut optimal = Vec::new();
        let mut exclusion = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| Error::TableData { line, message };
            let trimmed = raw.trim();
            if let Some(v) = trimmed.strip_prefix(HEADER) {
                if version.is_some() {
                    return Err(err("duplicate version header".into()));
                }
                version = Some(v.trim().parse::<u32>().map_err(|_| err("bad version".into()))?);
                continue;
            }
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if version.is_none() {
                return Err(err("data before the version header".into()));
            }
            let fields: Vec<&str> = trimmed.split('|').map(str::trim).collect();
            let [r, kind, comp, bound] = fields[..] else {
                return Err(err(format!("expected 4 fields, found {}", fields.len())));
            };
            let r: usize = r.parse().map_err(|_| err(format!("bad length {r:?}")))?;
            match kind {
                "optimal" => {
                    let composition =
                        parse_composition(comp).map_err(|e| err(e.to_string()))?;
                    if composition.len() != r {
                        return Err(err(format!(
                            "composition has length {}, row says {r}",
                            composition.len()
                        )));
                    }
                    let bound_text = bound
                        .strip_prefix('<')
                        .ok_or_else(|| err("optimal bound must look like <D".into()))?;
                    let value =
                        parse_decimal_upper(bound_text).map_err(|e| err(e.to_string()))?;
                    optimal.push(OptimalRow {
                        r,
                        composition,
                        bound_text: bound_text.to_string(),
                        bound: value,
                        line,
                    });
                }
                "exclusion" => {
                    let tail_text = comp
                        .strip_prefix("s1,")
                        .ok_or_else(|| err("exclusion rows start with s1,".into()))?;
                    let tail = parse_composition(tail_text).map_err(|e| err(e.to_string()))?;
                    if tail.len() + 1 != r {
                        return Err(err(format!(
                            "exclusion tuple has length {}, row says {r}",
                            tail.len() + 1
                        )));
                    }
                    let k = bound
                        .strip_prefix("<=")
                        .ok_or_else(|| err("exclusion bound must look like <=K".into()))?;
                    let s1_bound = k.parse().map_err(|_| err(format!("bad s1 bound {k:?}")))?;
                    exclusion.push(ExclusionRow {
                        r,
                        tail: tail.exponents().to_vec(),
                        s1_bound,
                        line,
                    });
                }
                other => return Err(err(format!("unknown kind {other:?}"))),
            }
        }
        let version = version.ok_or(Error::TableData {
            line: 0,
            message: "missing version header".into(),
        })?;
        Ok(Self {
            version,
            sha256: sha256_hex(text),
            optimal,
            exclusion,
        })
    }

    /// Lengths with at least one row, ascending.
    pub fn lengths(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .optimal
            .iter()
            .map(|o| o.r)
            .chain(self.exclusion.iter().map(|e| e.r))
            .collect();
        set.into_iter().collect()
    }

    pub fn optimal_rows(&self, r: usize) -> Vec<&OptimalRow> {
        self.optimal.iter().filter(|o| o.r == r).collect()
    }

    pub fn exclusion_rows(&self, r: usize) -> Vec<&ExclusionRow> {
        self.exclusion.iter().filter(|e| e.r == r).collect()
    }

    pub fn optimal_set(&self, r: usize) -> Vec<Composition> {
        self.optimal_rows(r)
            .into_iter()
            .map(|o| o.composition.clone())
            .collect()
    }

    pub fn exclusion_tails(&self, r: usize) -> Vec<Vec<u32>> {
        self.exclusion_rows(r)
            .into_iter()
            .map(|e| e.tail.clone())
            .collect()
    }

    /// Largest exponent in any row of length `r` (optimal tuples and
    /// exclusion tails).
    pub fn max_exponent(&self, r: usize) -> u32 {
        let a = self.optimal_rows(r).into_iter().map(|o| o.composition.max_exponent());
        let b = self
            .exclusion_rows(r)
            .into_iter()
            .flat_map(|e| e.tail.iter().copied());
        a.chain(b).max().unwrap_or(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_checksum_and_shape() {
        let t = TableData::builtin().unwrap();
        assert_eq!(t.version, 1);
        assert_eq!(sha256_hex(BUILTIN_TABLES), BUILTIN_SHA256);
        assert_eq!(t.lengths(), (2..=24).collect::<Vec<_>>());
        // optimal-set sizes for r = 2..18, then one all-ones row for 19..24
        let sizes: Vec<usize> = (2..=24).map(|r| t.optimal_rows(r).len()).collect();
        assert_eq!(
            sizes,
            vec![1, 2, 3, 3, 5, 5, 5, 8, 8, 7, 5, 5, 3, 3, 2, 2, 1, 1, 1, 1, 1, 1, 1]
        );
        let excl: Vec<usize> = (2..=18).map(|r| t.exclusion_rows(r).len()).collect();
        assert_eq!(excl, vec![1, 2, 4, 5, 7, 7, 8, 15, 15, 13, 11, 8, 5, 4, 2, 2, 1]);
        assert_eq!(t.max_exponent(5), 4);
        assert_eq!(t.max_exponent(11), 6);
    }

    #[test]
    fn r5_rows() {
        let t = TableData::builtin().unwrap();
        let opt = t.optimal_rows(5);
        assert_eq!(opt[0].composition.exponents(), &[1, 1, 1, 1, 2]);
        assert_eq!(opt[0].bound, parse_decimal_upper("0.502399297").unwrap());
        let ex = t.exclusion_rows(5);
        assert_eq!(ex[0].tail, vec![3, 1, 1, 1]);
        assert_eq!(ex[0].s1_bound, 4);
        assert_eq!(ex[0].label(), "s1,3,{1}^3");
    }

    #[test]
    fn parse_errors_name_the_line() {
        let bad_len = "# mhs-tables v1\n3 | optimal | 1,2 | <0.5\n";
        assert!(matches!(TableData::parse(bad_len), Err(Error::TableData { line: 2, .. })));
        let bad_kind = "# mhs-tables v1\n\n2 | best | 1,2 | <0.5\n";
        assert!(matches!(TableData::parse(bad_kind), Err(Error::TableData { line: 3, .. })));
        let no_header = "2 | optimal | 1,2 | <0.5\n";
        assert!(TableData::parse(no_header).is_err());
        let bad_bound = "# mhs-tables v1\n2 | exclusion | s1,1 | 3\n";
        assert!(TableData::parse(bad_bound).is_err());
    }

    #[test]
    fn edited_tables_change_checksum() {
        let edited = BUILTIN_TABLES.replace("<0.994099321", "<0.994099322");
        let t = TableData::parse(&edited).unwrap();
        assert_ne!(t.sha256, BUILTIN_SHA256);
    }
}
