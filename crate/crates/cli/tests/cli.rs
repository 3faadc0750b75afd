//! End-to-end tests of the `stasheff` binary: exit codes, determinism and
//! golden files.  Set `STASHEFF_BLESS=1` to rewrite the golden files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stasheff"))
}

fn manifest() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn scenario(name: &str) -> PathBuf {
    manifest().join("scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let p = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn golden(rel: &str, actual: &str) {
    let p = manifest().join("tests/golden").join(rel);
    if std::env::var_os("STASHEFF_BLESS").is_some() {
        std::fs::create_dir_all(p.parent().unwrap()).unwrap();
        std::fs::write(&p, actual).unwrap();
    }
    let want = std::fs::read_to_string(&p).unwrap_or_else(|_| panic!("missing golden file {}", p.display()));
    assert_eq!(actual, want, "output differs from {}", p.display());
}

fn shipped_scenarios() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(manifest().join("scenarios"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    v
}

#[test]
fn shipped_scenarios_pass_and_are_byte_stable() {
    for p in shipped_scenarios() {
        let a = run(&["run", p.to_str().unwrap()]);
        assert_eq!(code(&a), 0, "{}: {}", p.display(), stdout(&a));
        let b = run(&["run", p.to_str().unwrap()]);
        assert_eq!(a.stdout, b.stdout, "{} is not deterministic", p.display());
    }
}

#[test]
fn golden_reports() {
    for name in ["njac1_prorep.json", "xy_lift.json", "inline_algebra.json"] {
        let o = run(&["run", scenario(name).to_str().unwrap()]);
        golden(&format!("reports/{name}"), &stdout(&o));
    }
}

#[test]
fn golden_emitted_descriptions() {
    for (id, field, file) in [
        ("njac(2)", "F2", "njac2_F2.json"),
        ("kpoints(2)", "Q", "kpoints2_Q.json"),
        ("ngr(3,1)", "Q", "ngr31_Q.json"),
        ("xy", "F3", "xy_F3.json"),
    ] {
        let o = run(&["emit", id, "--field", field]);
        assert_eq!(code(&o), 0);
        golden(&format!("emit/{file}"), &stdout(&o));
    }
}

#[test]
fn emitted_descriptions_load_back() {
    let o = run(&["emit", "massey", "--field", "F5"]);
    let p = scratch("massey_F5.json", &stdout(&o));
    let check = run(&["check-ainf", p.to_str().unwrap(), "--arity", "4"]);
    assert_eq!(code(&check), 0, "{}", stdout(&check));
    let model = run(&["minimal-model", p.to_str().unwrap()]);
    assert_eq!(code(&model), 0, "{}", stdout(&model));
    assert!(stdout(&model).contains("\"higher_arities\": [\n          3\n        ]"));
}

#[test]
fn unknown_builtins_fail_to_emit() {
    assert_eq!(code(&run(&["emit", "nope(1)"])), 2);
}

#[test]
fn exit_code_contract() {
    let malformed = scratch("malformed.json", "{ not json");
    assert_eq!(code(&run(&["run", malformed.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["run", "/nonexistent/scenario.json"])), 2);
    let failing = scratch(
        "failing.json",
        r#"{"field":{"kind":"Fp","p":3},"algebra":"xy","base":"trunc(3)",
            "checks":[{"check":"lift","alpha":"1*x⊗t","expect":"lifts"}]}"#,
    );
    assert_eq!(code(&run(&["run", failing.to_str().unwrap()])), 1);
    let refused = scratch(
        "refused.json",
        r#"{"field":{"kind":"Fp","p":2},"algebra":"xy_acyclic","base":"trunc(2)",
            "checks":[{"check":"prorep"}]}"#,
    );
    assert_eq!(code(&run(&["run", refused.to_str().unwrap()])), 3);
    let mixed = scratch(
        "mixed.json",
        r#"{"field":{"kind":"Fp","p":2},"algebra":"xy_acyclic","base":"trunc(2)",
            "checks":[{"check":"prorep"},{"check":"mc","expect_count":1}]}"#,
    );
    assert_eq!(code(&run(&["run", mixed.to_str().unwrap()])), 1);
}

#[test]
fn lift_subcommand_records_the_obstruction() {
    let base = ["lift", "xy", "--field", "F3", "--base", "trunc(3)", "--alpha", "1*x⊗t"];
    let plain = run(&base);
    assert_eq!(code(&plain), 0);
    assert!(stdout(&plain).contains("\"outcome\": \"obstructed\""));
    let mut expected = base.to_vec();
    expected.extend(["--expect", "obstructed"]);
    assert_eq!(code(&run(&expected)), 0);
    let mut wrong = base.to_vec();
    wrong.extend(["--expect", "lifts"]);
    let o = run(&wrong);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("\"witness\""));
}

#[test]
fn single_check_subcommands() {
    let cases: [(&[&str], i32); 11] = [
        (&["check-ainf", "massey", "--field", "Q", "--arity", "5"], 0),
        (&["bar", "kpoints(2)", "--field", "Q", "--truncation", "3"], 0),
        (&["shat", "njac(2)", "--field", "F2"], 0),
        (&["koszul", "kpoints(2)", "--field", "Q", "--truncation", "3"], 0),
        (&["mc", "njac(1)", "--field", "F2", "--base", "trunc(3)"], 0),
        (&["mc", "xy", "--field", "Q", "--base", "trunc(3)", "--alpha", "1*x⊗t"], 1),
        (&["pi0", "xy", "--field", "F2", "--base", "trunc(3)"], 0),
        (&["obstruct", "xy", "--field", "F2", "--base", "trunc(3)"], 0),
        (&["prorep", "njac(1)", "--field", "F2", "--base", "trunc(3)"], 0),
        (&["invariance", "xy_acyclic", "--field", "F2", "--base", "trunc(3)"], 0),
        (&["properties", "njac(1)", "--field", "F3", "--base", "trunc(3)", "--seed", "4"], 0),
    ];
    for (args, want) in cases {
        let o = run(args);
        assert_eq!(code(&o), want, "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).contains("\"schema\": 1"));
    }
    // missing base and missing field are plumbing errors
    assert_eq!(code(&run(&["pi0", "xy", "--field", "F2"])), 2);
    assert_eq!(code(&run(&["pi0", "xy", "--base", "trunc(2)"])), 2);
    assert_eq!(code(&run(&["pi0", "xy", "--field", "R", "--base", "trunc(2)"])), 2);
}

#[test]
fn report_flag_writes_the_same_document() {
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("report.json");
    let _ = std::fs::remove_file(&out);
    let s = scenario("njac1_prorep.json");
    let direct = run(&["run", s.to_str().unwrap()]);
    let to_file = run(&["run", s.to_str().unwrap(), "--report", out.to_str().unwrap()]);
    assert_eq!(code(&to_file), 0);
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), direct.stdout);
}

#[test]
fn timings_only_on_request() {
    let s = scenario("njac1_prorep.json");
    assert!(!stdout(&run(&["run", s.to_str().unwrap()])).contains("timing_ms"));
    assert!(stdout(&run(&["run", s.to_str().unwrap(), "--timings"])).contains("timing_ms"));
}
