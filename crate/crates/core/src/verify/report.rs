use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::zlinalg::AbelianInvariants;

/// Whether a check is expected to pass or to fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    #[default]
    Pass,
    Fail,
}

/// Outcome of one check, with named sub-checks and witness data.
///
/// Parameters are strings and witnesses are JSON values built only from
/// strings, integers and containers, so serialization is exact and stable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub expect: Expectation,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub witness: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subchecks: Vec<CheckReport>,
}

impl CheckReport {
    /// A passing report with no sub-checks yet.
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            params: BTreeMap::new(),
            expect: Expectation::Pass,
            passed: true,
            witness: BTreeMap::new(),
            subchecks: Vec::new(),
        }
    }

    /// A leaf check with the given outcome.
    pub fn leaf(name: impl Into<String>, passed: bool) -> Self {
        let mut r = Self::new(name);
        r.passed = passed;
        r
    }

    pub fn param(mut self, k: &str, v: impl Display) -> Self {
        self.params.insert(k.to_string(), v.to_string());
        self
    }

    pub fn with_witness(mut self, k: &str, v: impl Into<Value>) -> Self {
        self.witness.insert(k.to_string(), v.into());
        self
    }

    pub fn set_witness(&mut self, k: &str, v: impl Into<Value>) {
        self.witness.insert(k.to_string(), v.into());
    }

    pub fn expecting(mut self, e: Expectation) -> Self {
        self.expect = e;
        self
    }

    /// Appends a sub-check; the parent fails if it does.
    pub fn push(&mut self, sub: CheckReport) -> bool {
        let ok = sub.passed;
        self.passed &= ok;
        self.subchecks.push(sub);
        ok
    }

    /// Records a failed sub-check built from an error.
    pub fn push_error(&mut self, name: &str, e: &crate::Error) {
        self.push(CheckReport::leaf(name, false).with_witness("error", e.to_string()));
    }

    /// Whether the outcome agrees with the expectation.
    pub fn as_expected(&self) -> bool {
        self.passed == (self.expect == Expectation::Pass)
    }

    /// Names of failed leaves, depth first, as `a/b/c`.
    pub fn failed_leaves(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_failed(String::new(), &mut out);
        out
    }

    fn collect_failed(&self, prefix: String, out: &mut Vec<String>) {
        let path = if prefix.is_empty() {
            self.name.clone()
        } else {
            format!("{prefix}/{}", self.name)
        };
        if self.passed {
            return;
        }
        if self.subchecks.is_empty() {
            out.push(path);
        } else {
            for s in &self.subchecks {
                s.collect_failed(path.clone(), out);
            }
        }
    }

    /// First sub-check with the given name, searching depth first.
    pub fn find(&self, name: &str) -> Option<&CheckReport> {
        if self.name == name {
            return Some(self);
        }
        self.subchecks.iter().find_map(|s| s.find(name))
    }

    /// `"k1=v1 k2=v2"` in key order.
    pub fn params_line(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Invariants as `{"free_rank": r, "torsion": ["d1", ...]}`.
pub fn invariants_value(a: &AbelianInvariants) -> Value {
    serde_json::to_value(a).expect("invariants serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregation_and_serialization() {
        let mut r = CheckReport::new("top").param("p", 3).param("m", 1);
        r.push(CheckReport::leaf("a", true));
        let mut b = CheckReport::new("b");
        b.push(CheckReport::leaf("inner", false).with_witness("kernel", invariants_value(
            &AbelianInvariants::from_cyclic_orders(&[2.into()]),
        )));
        r.push(b);
        assert!(!r.passed);
        assert_eq!(r.failed_leaves(), vec!["top/b/inner".to_string()]);
        assert_eq!(r.params_line(), "m=1 p=3");
        let j = serde_json::to_string(&r).unwrap();
        assert!(j.contains(r#""torsion":["2"]"#));
        let back: CheckReport = serde_json::from_str(&j).unwrap();
        assert_eq!(back, r);
        assert!(!r.as_expected());
        assert!(r.clone().expecting(Expectation::Fail).as_expected());
    }
}
