//! Scenario documents: an algebra, a base, a truncation, a seed and a
//! list of checks, evaluated into a report.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use stasheff::error::{Error, Result};
use stasheff::field::Field;

use crate::checks::{run_check, Check, Context};
use crate::format::{load_algebra, load_base, FieldDesc, Source};
use crate::report::{plumbing_failure, CheckReport, Report, Summary, SCHEMA};

fn default_truncation() -> usize {
    3
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    /// Optional when an inline algebra pins its field.
    #[serde(default)]
    pub field: Option<FieldDesc>,
    pub algebra: Source,
    #[serde(default)]
    pub base: Option<Source>,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    #[serde(default)]
    pub seed: u64,
    pub checks: Vec<Check>,
}

/// How a scenario is run.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Record wall-clock time per check.  Off by default so that reports
    /// are byte-identical across runs.
    pub timings: bool,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("scenario: {e}")))
    }

    pub fn resolve_field(&self) -> Result<Field> {
        let pinned = self.field.or(self.algebra.pinned_field());
        let f = pinned
            .ok_or_else(|| Error::Parse("scenario names no field".into()))?
            .to_field()?;
        Ok(f)
    }

    pub fn context(&self) -> Result<Context> {
        let field = self.resolve_field()?;
        let algebra = load_algebra(&self.algebra, Some(field))?;
        let base = self.base.as_ref().map(|b| load_base(b, Some(field))).transpose()?;
        Ok(Context {
            field,
            algebra,
            base,
            truncation: self.truncation,
            seed: self.seed,
        })
    }

    pub fn run(&self, opts: RunOptions) -> Report {
        let ctx = match self.context() {
            Ok(c) => c,
            Err(e) => return plumbing_failure(&self.name, e.to_string()),
        };
        let checks: Vec<CheckReport> = self
            .checks
            .iter()
            .map(|check| {
                let start = Instant::now();
                let out = run_check(&ctx, check);
                CheckReport {
                    check: check.name().to_string(),
                    verdict: out.verdict,
                    reason: out.reason,
                    details: out.details,
                    witness: out.witness,
                    timing_ms: opts.timings.then(|| start.elapsed().as_millis() as u64),
                }
            })
            .collect();
        let summary = Summary::of(&checks);
        Report {
            schema: SCHEMA,
            scenario: self.name.clone(),
            field: ctx.field.to_string(),
            algebra: self.algebra.name(),
            base: self.base.as_ref().map(Source::name),
            truncation: self.truncation,
            seed: self.seed,
            exit_code: summary.exit_code(),
            checks,
            summary,
        }
    }
}

/// Parses and runs a scenario document; unparseable input yields a
/// plumbing-failure report.
pub fn run_scenario_text(text: &str, opts: RunOptions) -> Report {
    match Scenario::parse(text) {
        Ok(s) => s.run(opts),
        Err(e) => plumbing_failure("", e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{Verdict, EXIT_ERROR, EXIT_FAIL, EXIT_PASS, EXIT_REFUSED};

    fn run(text: &str) -> Report {
        run_scenario_text(text, RunOptions::default())
    }

    #[test]
    fn njac1_prorep_passes_with_four_on_each_side() {
        let r = run(r#"{"name":"njac1","field":{"kind":"Fp","p":2},"algebra":"njac(1)",
            "base":"trunc(3)","checks":[{"check":"prorep"}]}"#);
        assert_eq!(r.exit_code, EXIT_PASS, "{}", r.to_json());
        assert_eq!(r.checks[0].details["lhs"], 4);
        assert_eq!(r.checks[0].details["rhs"], 4);
    }

    #[test]
    fn obstructed_lift_is_expected() {
        let r = run(r#"{"field":{"kind":"Fp","p":3},"algebra":"xy","base":"trunc(3)",
            "checks":[{"check":"lift","alpha":"1*x⊗t","expect":"obstructed"}]}"#);
        assert_eq!(r.exit_code, EXIT_PASS, "{}", r.to_json());
        assert_eq!(r.checks[0].details["outcome"], "obstructed");
        let wrong = run(r#"{"field":{"kind":"Fp","p":3},"algebra":"xy","base":"trunc(3)",
            "checks":[{"check":"lift","alpha":"1*x⊗t","expect":"lifts"}]}"#);
        assert_eq!(wrong.exit_code, EXIT_FAIL);
        assert!(wrong.checks[0].witness.is_some());
    }

    #[test]
    fn malformed_documents_are_plumbing_errors() {
        for text in ["{", r#"{"algebra":"xy","checks":[]}"#, r#"{"field":{"kind":"Q"},"algebra":"nope","checks":[]}"#,
            r#"{"field":{"kind":"Q"},"algebra":"xy","checks":[{"check":"bogus"}]}"#] {
            assert_eq!(run(text).exit_code, EXIT_ERROR, "{text}");
        }
        let no_base = run(r#"{"field":{"kind":"Q"},"algebra":"xy","checks":[{"check":"pi0"}]}"#);
        assert_eq!(no_base.checks[0].verdict, Verdict::Error);
    }

    #[test]
    fn hypothesis_gates_are_refusals() {
        // a comparison without a Koszul certificate
        let r = run(r#"{"field":{"kind":"Fp","p":2},"algebra":"xy_acyclic","base":"trunc(2)",
            "checks":[{"check":"prorep"}]}"#);
        assert_eq!(r.exit_code, EXIT_REFUSED, "{}", r.to_json());
        // a Koszul probe on an algebra with Ā⁰ ≠ 0
        let dual = run(r#"{"field":{"kind":"Q"},"algebra":{"basis":[{"label":"1","degree":0},
            {"label":"e","degree":0}],"unit":"1","aug":true},"checks":[{"check":"koszul"}]}"#);
        assert_eq!(dual.exit_code, EXIT_REFUSED, "{}", dual.to_json());
        // enumerating solutions over Q is a misconfigured check
        let q = run(r#"{"field":{"kind":"Q"},"algebra":"xy","base":"trunc(2)","checks":[{"check":"mc"}]}"#);
        assert_eq!(q.exit_code, EXIT_ERROR);
    }

    #[test]
    fn failures_carry_witnesses() {
        let broken = r#"{"field":{"kind":"Fp","p":2},"algebra":{"basis":[{"label":"1","degree":0},
            {"label":"x","degree":1},{"label":"y","degree":2},{"label":"z","degree":3}],
            "ops":[{"arity":2,"in":["x","x"],"out":[{"label":"y","coeff":"1"}]},
                   {"arity":2,"in":["x","y"],"out":[{"label":"z","coeff":"1"}]}],
            "unit":"1","aug":true},"checks":[{"check":"axioms","arity":3}]}"#;
        let r = run(broken);
        assert_eq!(r.exit_code, EXIT_FAIL);
        let w = r.checks[0].witness.as_ref().unwrap();
        assert_eq!(w["inputs"], serde_json::json!(["x", "x", "x"]));
    }

    #[test]
    fn timings_are_opt_in() {
        let text = r#"{"field":{"kind":"Q"},"algebra":"kpoints(2)","checks":[{"check":"axioms"}]}"#;
        assert!(run(text).checks[0].timing_ms.is_none());
        let timed = run_scenario_text(text, RunOptions { timings: true });
        assert!(timed.checks[0].timing_ms.is_some());
    }
}
