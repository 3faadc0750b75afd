//! The acceptance criteria, each an exact check with a pinned runtime
//! budget.  The `acceptance` test target prints one PASS/FAIL line per
//! criterion.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use stasheff::ainfty::builtins::{builtin, massey, xy, xy_acyclic};
use stasheff::ainfty::AInfAlgebra;
use stasheff::artin::{builtin_base, trunc_poly, ArtinianDGAlgebra};
use stasheff::bar::{koszul_probe, s_hat_cohomology, Shat};
use stasheff::error::Result;
use stasheff::field::Field;
use stasheff::linalg::SparseVec;
use stasheff::mc::{invariance_check, Tower};
use stasheff::properties::{property_suite, SuiteConfig};
use stasheff::random::{random_assoc, rng};
use stasheff::transfer::minimal_model;
use stasheff::twist::prorep_compare;
use stasheff_cli::scenario::{run_scenario_text, RunOptions};

pub const BUDGET_KPOINTS: Duration = Duration::from_secs(10);
pub const BUDGET_NJAC: Duration = Duration::from_secs(5);
pub const BUDGET_OBSTRUCTION: Duration = Duration::from_secs(5);
pub const BUDGET_PROREP: Duration = Duration::from_secs(60);
pub const BUDGET_INVARIANCE: Duration = Duration::from_secs(60);
pub const BUDGET_PROPERTIES: Duration = Duration::from_secs(300);

/// Truncation orders of the two shadow criteria.
pub const KPOINTS_ORDER: usize = 4;
pub const NJAC_ORDER: usize = 3;
/// Highest Stasheff arity in the property suites.
pub const PROPERTY_ARITY: usize = 5;
/// Number of seeded random instances in the property suites.
pub const RANDOM_INSTANCES: u64 = 50;
/// Repetitions of each scenario in the determinism criterion.
pub const DETERMINISM_RUNS: usize = 3;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    /// The exact condition held (ignoring the budget).
    pub exact: bool,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
    pub detail: String,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.exact && self.budget.is_none_or(|b| self.elapsed <= b)
    }

    pub fn line(&self) -> String {
        let budget = match self.budget {
            Some(b) => format!(" (budget {} s)", b.as_secs()),
            None => String::new(),
        };
        format!(
            "{} C{} {}: {} [{:.2} s{}]",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64(),
            budget
        )
    }
}

fn timed(
    id: usize,
    title: &'static str,
    budget: Option<Duration>,
    f: impl FnOnce() -> Result<(bool, String)>,
) -> CriterionResult {
    let start = Instant::now();
    let (exact, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        title,
        exact,
        elapsed: start.elapsed(),
        budget,
        detail,
    }
}

fn f2() -> Field {
    Field::prime(2).unwrap()
}

/// Off-degree-zero cohomology is read from the stable part reported by
/// the Koszul probe; `H⁰` comes from `Ŝ_N` itself.
fn shadow(a: &AInfAlgebra, order: usize, weights: &[usize], commute: bool) -> Result<(bool, String)> {
    let probe = koszul_probe(a, order, None)?;
    let c = s_hat_cohomology(a, order)?;
    let off_zero: Vec<(i64, usize)> = probe
        .stable
        .iter()
        .filter(|(&i, &n)| i != 0 && n > 0)
        .map(|(&i, &n)| (i, n))
        .collect();
    let commutes = c.h0.generators_commute();
    let exact = off_zero.is_empty() && c.h0.weight_dims == weights && commutes == commute;
    let detail = format!(
        "stable H^i≠0 off degree 0: {off_zero:?}, H⁰ weight dims {:?}, weight-1 classes commute: {commutes}",
        c.h0.weight_dims
    );
    Ok((exact, detail))
}

/// Λ(k²) over ℚ: the truncated dual has cohomology only in degree 0,
/// with the weight dimensions of a commutative power series ring.
pub fn kpoints_shadow() -> CriterionResult {
    timed(1, "k-points shadow", Some(BUDGET_KPOINTS), || {
        shadow(&builtin(Field::Rational, "kpoints(2)")?, KPOINTS_ORDER, &[1, 2, 3, 4, 5], true)
    })
}

/// njac(2): zero differential on `Ŝ_N` and the weight dimensions of a
/// free algebra on two generators.
pub fn njac_shadow() -> CriterionResult {
    timed(2, "NJac shadow", Some(BUDGET_NJAC), || {
        let a = builtin(Field::Rational, "njac(2)")?;
        let s = Shat::new(&a, NJAC_ORDER)?;
        let zero_d = s.alg().m1_map().is_zero();
        let (ok, detail) = shadow(&a, NJAC_ORDER, &[1, 2, 4, 8], false)?;
        Ok((ok && zero_d, format!("zero differential: {zero_d}, {detail}")))
    })
}

/// The (x,y)-example along `k[t]/t³ → k[t]/t²`: `o₂` vanishes exactly on
/// the brute-force liftable elements, and `o₂(x⊗t)` is the nonzero class
/// of `y⊗t²`.
pub fn obstruction_soundness() -> CriterionResult {
    timed(3, "obstruction soundness", Some(BUDGET_OBSTRUCTION), || {
        let mut exact = true;
        let mut parts = Vec::new();
        for p in [2u64, 3] {
            let field = Field::prime(p)?;
            let r = trunc_poly(field, 3, 0)?;
            let t = Tower::new(&xy(field)?, &r, 2)?;
            let below = t.quotient.enumerate_mc()?;
            let liftable: HashSet<SparseVec> = t.full.enumerate_mc()?.iter().map(|a| t.project(a)).collect();
            let mut agree = 0;
            for v in &below {
                let o = t.o2(v)?;
                if o.vanishes == liftable.contains(v) && o.lift_independent {
                    agree += 1;
                }
            }
            let x_t = t.quotient.vector(&[("x⊗t", 1)])?;
            let o = t.o2(&x_t)?;
            let expected = t.full.vector(&[("y⊗t^2", 1)])?;
            let ok = agree == below.len() && !o.vanishes && o.representative == expected;
            exact &= ok;
            parts.push(format!(
                "F{p}: {agree}/{} agree, o₂(x⊗t) = [{}] nonzero: {}",
                below.len(),
                t.full.render(&o.representative),
                !o.vanishes
            ));
        }
        Ok((exact, parts.join("; ")))
    })
}

/// The base-case table of the pro-representability comparison, with the
/// expected count on each side.
pub const PROREP_CASES: [(&str, &str, usize); 3] = [("njac(1)", "trunc(3)", 4), ("njac(2)", "trunc(2)", 16), ("kpoints(2)", "trunc(2)", 4)];

pub fn prorep_table() -> CriterionResult {
    timed(4, "classical pro-representability", Some(BUDGET_PROREP), || {
        let mut exact = true;
        let mut parts = Vec::new();
        for (a, r, want) in PROREP_CASES {
            let rep = prorep_compare(&builtin(f2(), a)?, &builtin_base(f2(), r)?, None)?;
            let ok = rep.bijective && rep.lhs == want && rep.rhs == want && rep.matching.len() == want;
            exact &= ok;
            parts.push(format!(
                "{a}×F2[t]/t^{}: lhs {} rhs {} (want {want}) bijective {}",
                &r[6..7],
                rep.lhs,
                rep.rhs,
                rep.bijective
            ));
        }
        let (a, r) = COMPANION_CASE;
        let rep = prorep_compare(&builtin(f2(), a)?, &builtin_base(f2(), r)?, None)?;
        parts.push(format!(
            "companion {a}×F2[t]/t^3 (not part of the criterion): lhs {} rhs {} bijective {}",
            rep.lhs, rep.rhs, rep.bijective
        ));
        Ok((exact, parts.join("; ")))
    })
}

/// The base for which `njac(2)` has 16 elements on each side.
pub const COMPANION_CASE: (&str, &str) = ("njac(2)", "trunc(3)");

/// Transfer-produced quasi-isomorphisms induce equivalences of the finite
/// groupoids over `𝔽₂[t]/t³`.
pub fn invariance() -> CriterionResult {
    timed(5, "invariance", Some(BUDGET_INVARIANCE), || {
        let r = trunc_poly(f2(), 3, 0)?;
        let mut exact = true;
        let mut parts = Vec::new();
        for (name, c) in [("xy_acyclic", xy_acyclic(f2())?), ("massey", massey(f2())?)] {
            let m = minimal_model(&c, 4)?;
            let rep = invariance_check(&m.morphism, &r)?;
            let ok = rep.passed && rep.pi0_source == rep.pi0_target && rep.hom_mismatches.is_empty();
            exact &= ok;
            parts.push(format!(
                "{name}: π₀ {} → {}, {} hom pairs equal: {}",
                rep.pi0_source, rep.pi0_target, rep.pairs_checked, ok
            ));
        }
        Ok((exact, parts.join("; ")))
    })
}

/// The golden (algebra, base, field) inputs of the property suites.
pub const GOLDEN_INPUTS: [(&str, &str, u64); 10] = [
    ("njac(1)", "trunc(3)", 2),
    ("njac(2)", "trunc(2)", 2),
    ("njac(1)", "nc_xy", 2),
    ("kpoints(2)", "trunc(2)", 2),
    ("kpoints(2)", "trunc(3)", 3),
    ("xy", "trunc(3)", 3),
    ("xy", "trunc(3,-1)", 2),
    ("massey", "trunc(2)", 2),
    ("xy_acyclic", "trunc(3)", 2),
    ("ngr(3,1)", "trunc(2)", 2),
];

/// Bases cycled through by the random instances.
pub const RANDOM_BASES: [&str; 4] = ["trunc(2)", "trunc(3)", "trunc(3,-1)", "dual_odd"];

fn random_instance(seed: u64) -> Result<(AInfAlgebra, ArtinianDGAlgebra)> {
    let field = Field::prime(if seed.is_multiple_of(2) { 2 } else { 3 })?;
    let a = random_assoc(&mut rng(seed), field, 3);
    let r = builtin_base(field, RANDOM_BASES[(seed as usize / 2) % RANDOM_BASES.len()])?;
    Ok((a, r))
}

pub fn property_suites() -> CriterionResult {
    timed(6, "property suites", Some(BUDGET_PROPERTIES), || {
        let mut failures = Vec::new();
        let mut instances = 0;
        let cfg = |seed| SuiteConfig {
            stasheff_arity: PROPERTY_ARITY,
            seed,
            ..SuiteConfig::default()
        };
        for (k, (a, r, p)) in GOLDEN_INPUTS.iter().enumerate() {
            let field = Field::prime(*p)?;
            let rep = property_suite(&builtin(field, a)?, &builtin_base(field, r)?, &cfg(k as u64))?;
            instances += 1;
            if !rep.passed() {
                failures.push(format!("{a}×{r}/F{p}: {:?}", rep.failures()));
            }
        }
        for seed in 0..RANDOM_INSTANCES {
            let (a, r) = random_instance(seed)?;
            let rep = property_suite(&a, &r, &cfg(seed))?;
            instances += 1;
            if !rep.passed() {
                failures.push(format!("random seed {seed}: {:?}", rep.failures()));
            }
        }
        let detail = if failures.is_empty() {
            format!("{instances} inputs ({} golden, {RANDOM_INSTANCES} random), all properties hold to arity {PROPERTY_ARITY}", GOLDEN_INPUTS.len())
        } else {
            failures.join("; ")
        };
        Ok((failures.is_empty(), detail))
    })
}

/// Directory of the shipped scenario files.
pub fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../cli/scenarios")
}

pub fn determinism() -> CriterionResult {
    timed(7, "determinism", None, || {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(scenario_dir())
            .map_err(|e| stasheff::Error::Parse(e.to_string()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        let mut unstable = Vec::new();
        for p in &paths {
            let text = std::fs::read_to_string(p).map_err(|e| stasheff::Error::Parse(e.to_string()))?;
            let first = run_scenario_text(&text, RunOptions::default()).to_json();
            for _ in 1..DETERMINISM_RUNS {
                if run_scenario_text(&text, RunOptions::default()).to_json() != first {
                    unstable.push(p.file_name().unwrap().to_string_lossy().into_owned());
                    break;
                }
            }
        }
        let exact = unstable.is_empty() && !paths.is_empty();
        Ok((
            exact,
            format!("{} scenarios × {DETERMINISM_RUNS} runs, unstable: {unstable:?}", paths.len()),
        ))
    })
}

pub fn all() -> Vec<CriterionResult> {
    vec![
        kpoints_shadow(),
        njac_shadow(),
        obstruction_soundness(),
        prorep_table(),
        invariance(),
        property_suites(),
        determinism(),
    ]
}
