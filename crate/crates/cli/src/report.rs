//! The versioned report document and the exit-code contract.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

/// Exit status of a run: every requested check passed.
pub const EXIT_PASS: i32 = 0;
/// A mathematical property failed on the input.
pub const EXIT_FAIL: i32 = 1;
/// Malformed input or a misconfigured check.
pub const EXIT_ERROR: i32 = 2;
/// A standing hypothesis of a check does not hold for the input.
pub const EXIT_REFUSED: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Refused,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub refused: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub scenario: String,
    pub field: String,
    pub algebra: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    pub truncation: usize,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
    pub summary: Summary,
    pub exit_code: i32,
}

impl Summary {
    pub fn of(checks: &[CheckReport]) -> Self {
        let mut s = Summary::default();
        for c in checks {
            match c.verdict {
                Verdict::Pass => s.passed += 1,
                Verdict::Fail => s.failed += 1,
                Verdict::Refused => s.refused += 1,
                Verdict::Error => s.errors += 1,
            }
        }
        s
    }

    /// A failed property outranks a plumbing error, which outranks a
    /// refusal.
    pub fn exit_code(&self) -> i32 {
        if self.failed > 0 {
            EXIT_FAIL
        } else if self.errors > 0 {
            EXIT_ERROR
        } else if self.refused > 0 {
            EXIT_REFUSED
        } else {
            EXIT_PASS
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// The report of a run that failed before any check could start.
pub fn plumbing_failure(scenario: &str, message: String) -> Report {
    let checks = vec![CheckReport {
        check: "load".into(),
        verdict: Verdict::Error,
        reason: Some(message),
        details: Value::Object(Default::default()),
        witness: None,
        timing_ms: None,
    }];
    let summary = Summary::of(&checks);
    Report {
        schema: SCHEMA,
        scenario: scenario.into(),
        field: String::new(),
        algebra: String::new(),
        base: None,
        truncation: 0,
        seed: 0,
        exit_code: summary.exit_code(),
        checks,
        summary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(verdict: Verdict) -> CheckReport {
        CheckReport {
            check: "c".into(),
            verdict,
            reason: None,
            details: Value::Null,
            witness: None,
            timing_ms: None,
        }
    }

    #[test]
    fn exit_code_priorities() {
        use Verdict::*;
        let code = |vs: &[Verdict]| Summary::of(&vs.iter().map(|&v| check(v)).collect::<Vec<_>>()).exit_code();
        assert_eq!(code(&[]), EXIT_PASS);
        assert_eq!(code(&[Pass, Pass]), EXIT_PASS);
        assert_eq!(code(&[Pass, Refused]), EXIT_REFUSED);
        assert_eq!(code(&[Refused, Error]), EXIT_ERROR);
        assert_eq!(code(&[Error, Fail, Refused]), EXIT_FAIL);
    }

    #[test]
    fn verdicts_serialize_lowercase() {
        assert_eq!(serde_json::to_string(&Verdict::Refused).unwrap(), "\"refused\"");
    }
}
