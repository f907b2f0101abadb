use std::cmp::Ordering;

use serde::Serialize;
use serde_json::Value;

pub const MANIFEST_FORMAT: &str = "mhs-verify-manifest";
pub const MANIFEST_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Verified,
    Failed,
    Skipped,
}

/// One checked claim. `parameters` and `witness` hold enough to rerun the
/// check; JSON object keys inside them are emitted in sorted order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    pub parameters: Value,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub witness: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(claim: impl Into<String>, parameters: Value) -> Self {
        Self {
            claim: claim.into(),
            parameters,
            outcome: Outcome::Verified,
            reason: None,
            witness: Value::Null,
            wall_time_ms: None,
        }
    }

    pub fn verified(mut self, witness: Value) -> Self {
        self.outcome = Outcome::Verified;
        self.witness = witness;
        self
    }

    pub fn failed(mut self, reason: impl Into<String>, witness: Value) -> Self {
        self.outcome = Outcome::Failed;
        self.reason = Some(reason.into());
        self.witness = witness;
        self
    }

    pub fn skipped(mut self, reason: impl Into<String>) -> Self {
        self.outcome = Outcome::Skipped;
        self.reason = Some(reason.into());
        self
    }

    /// `verified` when `ok`, otherwise `failed` with `reason`.
    pub fn decide(self, ok: bool, reason: impl Into<String>, witness: Value) -> Self {
        if ok {
            self.verified(witness)
        } else {
            self.failed(reason, witness)
        }
    }

    pub fn is_verified(&self) -> bool {
        self.outcome == Outcome::Verified
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub verified: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Manifest {
    pub format: &'static str,
    pub version: u32,
    pub tables_sha256: String,
    pub summary: Summary,
    pub reports: Vec<VerificationReport>,
}

impl Manifest {
    pub fn new(tables_sha256: impl Into<String>, mut reports: Vec<VerificationReport>) -> Self {
        reports.sort_by(|a, b| claim_order(&a.claim, &b.claim));
        let mut summary = Summary::default();
        for r in &reports {
            match r.outcome {
                Outcome::Verified => summary.verified += 1,
                Outcome::Failed => summary.failed += 1,
                Outcome::Skipped => summary.skipped += 1,
            }
        }
        Self {
            format: MANIFEST_FORMAT,
            version: MANIFEST_VERSION,
            tables_sha256: tables_sha256.into(),
            summary,
            reports,
        }
    }

    pub fn all_verified(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        text
    }
}

/// Natural order on claim ids: digit runs compare numerically, so `r9`
/// sorts before `r10`.
pub fn claim_order(a: &str, b: &str) -> Ordering {
    let (mut x, mut y) = (a.as_bytes(), b.as_bytes());
    loop {
        match (x.first(), y.first()) {
            (None, None) => return Ordering::Equal,
            (None, _) => return Ordering::Less,
            (_, None) => return Ordering::Greater,
            (Some(c), Some(d)) if c.is_ascii_digit() && d.is_ascii_digit() => {
                let i = x.iter().take_while(|c| c.is_ascii_digit()).count();
                let j = y.iter().take_while(|c| c.is_ascii_digit()).count();
                let (u, v) = (trim_zeros(&x[..i]), trim_zeros(&y[..j]));
                let ord = u.len().cmp(&v.len()).then(u.cmp(v)).then(i.cmp(&j));
                if ord != Ordering::Equal {
                    return ord;
                }
                x = &x[i..];
                y = &y[j..];
            }
            (Some(c), Some(d)) => {
                if c != d {
                    return c.cmp(d);
                }
                x = &x[1..];
                y = &y[1..];
            }
        }
    }
}

fn trim_zeros(d: &[u8]) -> &[u8] {
    let k = d.iter().take_while(|&&c| c == b'0').count();
    &d[k..]
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn natural_claim_order() {
        let mut ids = vec!["table1.r10.optimal.2", "table1.r9.optimal.1", "table1.r10.optimal.10", "a"];
        ids.sort_by(|a, b| claim_order(a, b));
        assert_eq!(ids, ["a", "table1.r9.optimal.1", "table1.r10.optimal.2", "table1.r10.optimal.10"]);
        assert_eq!(claim_order("r007", "r7"), Ordering::Greater);
    }

    #[test]
    fn manifest_is_sorted_and_counted() {
        let a = VerificationReport::new("x.r10", json!({"r": 10})).verified(json!(1));
        let b = VerificationReport::new("x.r2", json!({"r": 2})).failed("nope", json!(null));
        let c = VerificationReport::new("x.r3", json!({})).skipped("later");
        let m1 = Manifest::new("abc", vec![a.clone(), b.clone(), c.clone()]);
        let m2 = Manifest::new("abc", vec![c, a, b]);
        assert_eq!(m1.to_json(), m2.to_json());
        assert_eq!(m1.reports[0].claim, "x.r2");
        assert_eq!(m1.summary, Summary { verified: 1, failed: 1, skipped: 1 });
        assert!(!m1.all_verified());
        let v: Value = serde_json::from_str(&m1.to_json()).unwrap();
        assert_eq!(v["reports"][1]["outcome"], "skipped");
        assert_eq!(v["reports"][1]["reason"], "later");
        assert!(v["reports"][0].get("wall_time_ms").is_none());
    }
}
