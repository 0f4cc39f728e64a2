//! Machine-readable reports: a command echo, a parameter set, and a list of
//! named checks with pass/fail/reported status.
//!
//! Reports serialize to JSON with a stable field order; identical inputs and
//! cache state give byte-identical output except for the elapsed-time
//! fields.  Exit-code contract: 0 when every assertable check passes, 1 when
//! at least one fails, 2 for usage errors.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Reported,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub computed: Value,
    pub expected: Value,
    pub ms: u64,
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub checks: Vec<Check>,
    pub version: String,
    pub cache: CacheStats,
}

impl Report {
    pub fn new(command: &str, params: Value) -> Report {
        Report {
            command: command.to_string(),
            params,
            checks: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            cache: CacheStats::default(),
        }
    }

    /// A check with an expected value: status is pass or fail.
    pub fn assert_check(
        &mut self,
        name: &str,
        anchor: &str,
        computed: Value,
        expected: Value,
        ms: u64,
    ) {
        let status = if computed == expected {
            Status::Pass
        } else {
            Status::Fail
        };
        self.checks.push(Check {
            name: name.to_string(),
            anchor: anchor.to_string(),
            status,
            computed,
            expected,
            ms,
        });
    }

    /// A check without an assertable expectation.
    pub fn report_check(&mut self, name: &str, anchor: &str, computed: Value, ms: u64) {
        self.checks.push(Check {
            name: name.to_string(),
            anchor: anchor.to_string(),
            status: Status::Reported,
            computed,
            expected: Value::Null,
            ms,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// A copy with elapsed-time fields zeroed, for determinism comparisons.
    pub fn normalized(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.ms = 0;
        }
        r
    }

    /// One human-readable line per check.
    pub fn summary_lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Reported => "reported",
                };
                let expected = if c.expected.is_null() {
                    String::new()
                } else {
                    format!(" expected={}", compact(&c.expected))
                };
                format!(
                    "[{status}] {} computed={}{} ({} ms)",
                    c.name,
                    compact(&c.computed),
                    expected,
                    c.ms
                )
            })
            .collect()
    }
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).unwrap_or_else(|_| "?".into())
}

pub fn params_object(pairs: &[(&str, Value)]) -> Value {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert(k.to_string(), v.clone());
    }
    Value::Object(map)
}

/// Milliseconds elapsed since the instant.
pub fn ms_since(start: std::time::Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

pub fn json_usize(v: usize) -> Value {
    json!(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_rules() {
        let mut r = Report::new("demo", params_object(&[("n", json!(2))]));
        r.assert_check("eq", "a = a", json!(4), json!(4), 3);
        r.assert_check("ne", "a = b", json!(4), json!(5), 3);
        r.report_check("info", "computed only", json!({"dim": 9}), 1);
        assert_eq!(r.checks[0].status, Status::Pass);
        assert_eq!(r.checks[1].status, Status::Fail);
        assert_eq!(r.checks[2].status, Status::Reported);
        assert!(!r.all_pass());
        assert_eq!(r.failures().len(), 1);
    }

    #[test]
    fn normalized_reports_are_deterministic() {
        let build = |ms| {
            let mut r = Report::new("demo", params_object(&[]));
            r.assert_check("eq", "a = a", json!(1), json!(1), ms);
            r
        };
        assert_eq!(build(5).normalized().to_json(), build(9).normalized().to_json());
    }

    #[test]
    fn json_has_stable_field_names() {
        let mut r = Report::new("demo", params_object(&[]));
        r.report_check("info", "anchor", json!(1), 0);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["command", "params", "checks", "version", "cache"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let check = &v["checks"][0];
        for key in ["name", "anchor", "status", "computed", "expected", "ms"] {
            assert!(check.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["cache"]["hits"], json!(0));
    }
}
