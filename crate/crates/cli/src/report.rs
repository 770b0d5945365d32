use std::fmt::Write;
use std::str::FromStr;

use prolim_core::verify::{CheckReport, Expectation};

use crate::run::SuiteReport;
use crate::ConfigError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(ConfigError(format!("unknown format {s:?}"))),
        }
    }
}

/// Canonical bytes for a report.
///
/// JSON goes through `serde_json::Value`, whose maps are ordered by key, so
/// keys come out sorted; arrays keep check order. Text has one line per
/// top-level check.
pub fn emit_report(r: &SuiteReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let v = serde_json::to_value(r).expect("report serializes");
            let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
            s.push('\n');
            s.into_bytes()
        }
        Format::Text => {
            let mut s = String::new();
            for c in &r.checks {
                text_line(&mut s, c);
            }
            let m = &r.summary;
            let _ = writeln!(
                s,
                "total={} passed={} failed={} expected_failures={} unexpected={}",
                m.total, m.passed, m.failed, m.expected_failures, m.unexpected
            );
            s.into_bytes()
        }
    }
}

fn text_line(s: &mut String, c: &CheckReport) {
    let status = if c.passed { "PASS" } else { "FAIL" };
    let _ = write!(s, "{status} {} {}", c.name, c.params_line());
    if c.expect == Expectation::Fail {
        s.push_str(" (expected fail)");
    }
    s.push('\n');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{run_suite, RunOptions, SuiteConfig};

    fn opts() -> RunOptions {
        RunOptions {
            max_order: 128,
            parallel: false,
        }
    }

    #[test]
    fn identical_bytes() {
        let c = SuiteConfig::from_json(r#"{"towers":[{"p":3,"d":1,"M":2}],"suites":["prop21","xa"],"seed":5,"samples":{"digits":3}}"#).unwrap();
        let r = run_suite(&c, opts()).unwrap();
        assert_eq!(emit_report(&r, Format::Json), emit_report(&r, Format::Json));
        let again = run_suite(&c, RunOptions { parallel: true, ..opts() }).unwrap();
        assert_eq!(emit_report(&r, Format::Json), emit_report(&again, Format::Json));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn text_lines() {
        let c = SuiteConfig::from_json(r#"{"towers":[{"p":3,"d":1,"M":3}],"suites":["prop21"]}"#).unwrap();
        let r = run_suite(&c, opts()).unwrap();
        let text = String::from_utf8(emit_report(&r, Format::Text)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "PASS prop_ses M=3 d=1 m=0 p=3 tower=0");
        assert_eq!(r.summary.passed, 4);
    }

    #[test]
    fn varpi_ideal_witness_in_json() {
        let c = SuiteConfig::from_json(r#"{"towers":[{"p":2,"d":1,"M":3}],"suites":["nakayama"]}"#).unwrap();
        let r = run_suite(&c, opts()).unwrap();
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.summary.expected_failures, 1);
        let json = String::from_utf8(emit_report(&r, Format::Json)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let nak = &v["checks"][3];
        let p2 = nak["subchecks"].as_array().unwrap().iter().find(|s| s["name"] == "p2_tower").unwrap();
        assert_eq!(p2["witness"]["kernel"]["torsion"], serde_json::json!(["2"]));
    }

    #[test]
    fn empty_suites() {
        let c = SuiteConfig::from_json(r#"{"towers":[{"p":3,"d":1,"M":3}],"suites":[]}"#).unwrap();
        let r = run_suite(&c, opts()).unwrap();
        assert!(r.checks.is_empty());
        assert_eq!(r.exit_code(), 0);
    }
}
