//! Named checks and their evaluation against a loaded algebra and base.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use stasheff::ainfty::{AInfAlgebra, AxiomReport};
use stasheff::artin::ArtinianDGAlgebra;
use stasheff::bar::{
    bar_complex, koszul_probe, s_hat_cohomology_of, twisting_cochain_residual, BarTruncation,
    FilteredCohomology, KoszulVerdict, Shat,
};
use stasheff::error::{Error, Result};
use stasheff::field::Field;
use stasheff::graded::GradedSpace;
use stasheff::linalg::SparseVec;
use stasheff::mc::{invariance_check, lift_mc, LiftOutcome, McSetting, Tower};
use stasheff::properties::{property_suite, SuiteConfig};
use stasheff::transfer::minimal_model;
use stasheff::twist::{prorep_compare, prorep_compare_noncomm, twisted_module};

use crate::format::{desc_from_algebra, parse_vector, terms_from_vector, TermDesc};
use crate::report::Verdict;

/// At most this many enumerated elements are listed in a report.
pub const LISTING_LIMIT: usize = 256;

/// A vector argument: `"c*label + …"` or a list of terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorArg {
    Text(String),
    Terms(Vec<TermDesc>),
}

impl VectorArg {
    pub fn parse(&self, field: Field, space: &GradedSpace) -> Result<SparseVec> {
        match self {
            VectorArg::Text(s) => parse_vector(field, space, s),
            VectorArg::Terms(t) => crate::format::vector_from_terms(field, space, t),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KoszulExpect {
    Koszul,
    NotKoszul,
    Any,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionExpect {
    Vanishes,
    Obstructed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiftExpect {
    Lifts,
    Obstructed,
}

/// A check with its parameters.  Unset orders default to the scenario
/// truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Check {
    /// The Stasheff identities, unit and augmentation.
    Axioms {
        #[serde(default)]
        arity: Option<usize>,
    },
    /// `d² = 0` on the truncated bar coalgebra and the two-sided bar complex.
    Bar {
        #[serde(default)]
        order: Option<usize>,
    },
    /// The dual DG algebra `Ŝ_N` with its dimension tables and `H⁰`.
    Shat {
        #[serde(default)]
        order: Option<usize>,
    },
    Koszul {
        #[serde(default)]
        order: Option<usize>,
        #[serde(default)]
        window: Option<(i64, i64)>,
        #[serde(default)]
        expect: Option<KoszulExpect>,
    },
    /// The residual of one element, or the full solution set.
    Mc {
        #[serde(default)]
        alpha: Option<VectorArg>,
        #[serde(default)]
        expect_count: Option<usize>,
    },
    Pi0 {
        #[serde(default)]
        expect_count: Option<usize>,
    },
    /// `o₂` along `R → R/m^{ν−1}`: for one element of the quotient, or
    /// compared against brute-force liftability on every element.
    Obstruct {
        #[serde(default)]
        alpha: Option<VectorArg>,
        #[serde(default)]
        expect: Option<ObstructionExpect>,
    },
    /// Order-by-order lifting of a layer-1 element.
    Lift {
        alpha: VectorArg,
        #[serde(default)]
        expect: Option<LiftExpect>,
    },
    Prorep {
        #[serde(default)]
        order: Option<usize>,
        #[serde(default)]
        expect_count: Option<usize>,
    },
    MinimalModel {
        #[serde(default)]
        arity: Option<usize>,
    },
    Invariance {
        #[serde(default)]
        arity: Option<usize>,
    },
    Properties {
        #[serde(default)]
        order: Option<usize>,
        #[serde(default)]
        stasheff_arity: Option<usize>,
        #[serde(default)]
        samples: Option<usize>,
    },
    TwistedModule {
        alpha: VectorArg,
        #[serde(default)]
        arity: Option<usize>,
    },
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Axioms { .. } => "axioms",
            Check::Bar { .. } => "bar",
            Check::Shat { .. } => "shat",
            Check::Koszul { .. } => "koszul",
            Check::Mc { .. } => "mc",
            Check::Pi0 { .. } => "pi0",
            Check::Obstruct { .. } => "obstruct",
            Check::Lift { .. } => "lift",
            Check::Prorep { .. } => "prorep",
            Check::MinimalModel { .. } => "minimal-model",
            Check::Invariance { .. } => "invariance",
            Check::Properties { .. } => "properties",
            Check::TwistedModule { .. } => "twisted-module",
        }
    }
}

/// The inputs shared by every check of a scenario.
#[derive(Clone, Debug)]
pub struct Context {
    pub field: Field,
    pub algebra: AInfAlgebra,
    pub base: Option<ArtinianDGAlgebra>,
    pub truncation: usize,
    pub seed: u64,
}

/// The result of one check before timing is attached.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub verdict: Verdict,
    pub reason: Option<String>,
    pub details: Value,
    pub witness: Option<Value>,
}

impl Outcome {
    fn new(passed: bool, details: Map<String, Value>, witness: Option<Value>) -> Self {
        Outcome {
            verdict: if passed { Verdict::Pass } else { Verdict::Fail },
            reason: None,
            details: Value::Object(details),
            witness,
        }
    }

    fn with_reason(mut self, passed: bool, reason: &str) -> Self {
        if !passed {
            self.reason = Some(reason.to_string());
        }
        self
    }
}

/// Hypothesis gates, infinite fields and enumeration caps are refusals;
/// everything else is an input or plumbing error.
pub fn classify(e: &Error) -> Verdict {
    match e {
        Error::Hypothesis(_) | Error::InfiniteField | Error::CapExceeded { .. } => Verdict::Refused,
        _ => Verdict::Error,
    }
}

pub fn run_check(ctx: &Context, check: &Check) -> Outcome {
    let result = match check {
        Check::Axioms { arity } => axioms(ctx, arity.unwrap_or(4)),
        Check::Bar { order } => bar(ctx, order.unwrap_or(ctx.truncation)),
        Check::Shat { order } => shat(ctx, order.unwrap_or(ctx.truncation)),
        Check::Koszul { order, window, expect } => koszul(
            ctx,
            order.unwrap_or(ctx.truncation),
            *window,
            expect.unwrap_or(KoszulExpect::Koszul),
        ),
        Check::Mc { alpha, expect_count } => mc(ctx, alpha.as_ref(), *expect_count),
        Check::Pi0 { expect_count } => pi0(ctx, *expect_count),
        Check::Obstruct { alpha, expect } => obstruct(ctx, alpha.as_ref(), *expect),
        Check::Lift { alpha, expect } => lift(ctx, alpha, *expect),
        Check::Prorep { order, expect_count } => prorep(ctx, *order, *expect_count),
        Check::MinimalModel { arity } => model(ctx, arity.unwrap_or(4)),
        Check::Invariance { arity } => invariance(ctx, arity.unwrap_or(4)),
        Check::Properties {
            order,
            stasheff_arity,
            samples,
        } => properties(ctx, *order, *stasheff_arity, *samples),
        Check::TwistedModule { alpha, arity } => module(ctx, alpha, arity.unwrap_or(3)),
    };
    result.unwrap_or_else(|e| Outcome {
        verdict: classify(&e),
        reason: Some(e.to_string()),
        details: Value::Object(Map::new()),
        witness: None,
    })
}

fn base(ctx: &Context) -> Result<&ArtinianDGAlgebra> {
    ctx.base
        .as_ref()
        .ok_or_else(|| Error::Parse("this check needs a base algebra".into()))
}

fn obj(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn terms(space: &GradedSpace, v: &SparseVec) -> Value {
    serde_json::to_value(terms_from_vector(space, v)).expect("terms serialize")
}

fn labels(space: &GradedSpace, idx: &[usize]) -> Value {
    idx.iter().map(|&i| Value::from(space.label(i))).collect()
}

fn listing(space: &GradedSpace, vs: &[SparseVec]) -> Value {
    vs.iter()
        .take(LISTING_LIMIT)
        .map(|v| Value::from(space.render(v)))
        .collect()
}

fn count_mismatch(expected: Option<usize>, actual: usize) -> Option<Value> {
    expected
        .filter(|&e| e != actual)
        .map(|e| json!({"expected": e, "actual": actual}))
}

fn axioms(ctx: &Context, arity: usize) -> Result<Outcome> {
    let a = &ctx.algebra;
    let report = a.check_axioms(arity)?;
    let unit = a.unit().map(|_| a.check_unit());
    let aug = a.is_augmented().then(|| a.check_augmentation());
    let unit_ok = unit.as_ref().is_none_or(|r| r.is_ok());
    let aug_ok = aug.as_ref().is_none_or(|r| r.is_ok());
    let mut details = obj(vec![
        ("arity", arity.into()),
        ("dim", a.dim().into()),
        ("arity_bound", a.arity_bound().into()),
        ("unital", unit.is_some().into()),
        ("augmented", aug.is_some().into()),
    ]);
    let mut witness = None;
    match &report {
        AxiomReport::Pass { checked_up_to } => {
            details.insert("checked_up_to".into(), (*checked_up_to).into());
        }
        AxiomReport::Fail { n, inputs, residual } => {
            witness = Some(json!({
                "identity": "stasheff",
                "arity": n,
                "inputs": labels(a.space(), inputs),
                "residual": terms(a.space(), residual),
            }));
        }
    }
    if witness.is_none() {
        if let Some(Err(e)) = &unit {
            witness = Some(json!({"identity": "unit", "message": e.to_string()}));
        } else if let Some(Err(e)) = &aug {
            witness = Some(json!({"identity": "augmentation", "message": e.to_string()}));
        }
    }
    let passed = report.passed() && unit_ok && aug_ok;
    Ok(Outcome::new(passed, details, witness).with_reason(passed, "an A∞ identity fails"))
}

fn bar(ctx: &Context, order: usize) -> Result<Outcome> {
    let a = &ctx.algebra;
    let b = BarTruncation::new(a, order)?;
    let d2 = b.d_squared_failure();
    let mut details = obj(vec![
        ("order", order.into()),
        ("dim", b.dim().into()),
        ("weight_dims", b.weight_slice_dims().into()),
        ("respects_weight", b.respects_weight().into()),
        ("d_squared_zero", d2.is_none().into()),
    ]);
    let mut witness = d2.map(|(i, v)| {
        json!({
            "complex": "bar",
            "element": b.space().label(i),
            "d_squared": terms(b.space(), &v),
        })
    });
    if witness.is_none() {
        details.insert("cohomology_dims".into(), json!(b.complex()?.betti()));
    }
    if let Some(u) = a.unit() {
        match bar_complex(a, order) {
            Ok(bc) => {
                details.insert("two_sided_dim".into(), bc.dim().into());
                details.insert("resolution_of_k".into(), bc.is_resolution_of_k(u).into());
            }
            Err(Error::Structural(msg)) if witness.is_none() => {
                witness = Some(json!({"complex": "two-sided bar", "message": msg}));
            }
            Err(e) => return Err(e),
        }
    }
    let passed = witness.is_none();
    Ok(Outcome::new(passed, details, witness).with_reason(passed, "d² ≠ 0"))
}

fn degree_weight_table(table: impl IntoIterator<Item = ((i64, usize), usize)>) -> Value {
    table
        .into_iter()
        .map(|((d, w), n)| json!({"degree": d, "weight": w, "dim": n}))
        .collect()
}

fn shat(ctx: &Context, order: usize) -> Result<Outcome> {
    let s = Shat::new(&ctx.algebra, order)?;
    let coh = s_hat_cohomology_of(&s)?;
    let c = s.alg().m1_complex()?;
    let mut h_table = Vec::new();
    for (&d, &n) in &coh.dims {
        if n == 0 {
            continue;
        }
        let fc = FilteredCohomology::compute(&c, d, |i| s.weight(i), order);
        for (w, &k) in fc.weight_dims(order).iter().enumerate() {
            if k > 0 {
                h_table.push(((d, w), k));
            }
        }
    }
    let axioms = s.alg().check_axioms(3)?;
    let tau = twisting_cochain_residual(&ctx.algebra, &s)?;
    let details = obj(vec![
        ("order", order.into()),
        ("dim", s.dim().into()),
        ("dims", degree_weight_table(coh.degree_weight_dims.clone())),
        ("cohomology_dims", json!(coh.dims)),
        ("cohomology_dims_by_weight", degree_weight_table(h_table)),
        ("h0_weight_dims", coh.h0.weight_dims.clone().into()),
        ("h0_generators_commute", coh.h0.generators_commute().into()),
        ("universal_twisting_cochain_is_mc", tau.is_zero().into()),
    ]);
    let witness = match &axioms {
        AxiomReport::Fail { n, inputs, residual } => Some(json!({
            "identity": "dg-algebra",
            "arity": n,
            "inputs": labels(s.alg().space(), inputs),
            "residual": terms(s.alg().space(), residual),
        })),
        AxiomReport::Pass { .. } if !tau.is_zero() => Some(json!({
            "identity": "universal twisting cochain",
            "residual": tau.iter().map(|(i, c)| json!([i, c.to_decimal()])).collect::<Vec<_>>(),
        })),
        AxiomReport::Pass { .. } => None,
    };
    let passed = witness.is_none();
    Ok(Outcome::new(passed, details, witness).with_reason(passed, "Ŝ_N is not a DG algebra"))
}

fn koszul(ctx: &Context, order: usize, window: Option<(i64, i64)>, expect: KoszulExpect) -> Result<Outcome> {
    let p = koszul_probe(&ctx.algebra, order, window)?;
    let (koszul, failing) = match p.verdict {
        KoszulVerdict::KoszulAtOrder(_) => (true, None),
        KoszulVerdict::FailsAt { degree, .. } => (false, Some(degree)),
    };
    let details = obj(vec![
        ("order", order.into()),
        ("window", json!([p.window.0, p.window.1])),
        ("raw", json!(p.raw)),
        ("raw_next", json!(p.raw_next)),
        ("stable", json!(p.stable)),
        ("koszul_at_order", koszul.into()),
    ]);
    let passed = match expect {
        KoszulExpect::Koszul => koszul,
        KoszulExpect::NotKoszul => !koszul,
        KoszulExpect::Any => true,
    };
    let witness = (!passed).then(|| match failing {
        Some(d) => json!({"stable_class_in_degree": d, "dim": p.stable[&d]}),
        None => json!({"stable": p.stable}),
    });
    Ok(Outcome::new(passed, details, witness).with_reason(passed, "Koszul verdict differs from the expectation"))
}

fn mc(ctx: &Context, alpha: Option<&VectorArg>, expect_count: Option<usize>) -> Result<Outcome> {
    let s = McSetting::new(&ctx.algebra, base(ctx)?)?;
    match alpha {
        Some(arg) => {
            let v = arg.parse(ctx.field, s.space())?;
            let res = s.mc_residual(&v)?;
            let details = obj(vec![("alpha", s.render(&v).into()), ("is_mc", res.is_zero().into())]);
            let witness = (!res.is_zero()).then(|| json!({"residual": terms(s.space(), &res)}));
            let passed = witness.is_none();
            Ok(Outcome::new(passed, details, witness).with_reason(passed, "not a Maurer–Cartan element"))
        }
        None => {
            let all = s.enumerate_mc()?;
            let details = obj(vec![
                ("count", all.len().into()),
                ("elements", listing(s.space(), &all)),
            ]);
            let witness = count_mismatch(expect_count, all.len());
            let passed = witness.is_none();
            Ok(Outcome::new(passed, details, witness).with_reason(passed, "count differs from the expectation"))
        }
    }
}

fn pi0(ctx: &Context, expect_count: Option<usize>) -> Result<Outcome> {
    let s = McSetting::new(&ctx.algebra, base(ctx)?)?;
    let p = s.pi0()?;
    let reps: Vec<SparseVec> = p.representatives.iter().map(|&i| p.elements[i].clone()).collect();
    let details = obj(vec![
        ("mc_count", p.elements.len().into()),
        ("count", p.count().into()),
        ("class_sizes", p.class_sizes().into()),
        ("representatives", listing(s.space(), &reps)),
    ]);
    let witness = count_mismatch(expect_count, p.count());
    let passed = witness.is_none();
    Ok(Outcome::new(passed, details, witness).with_reason(passed, "count differs from the expectation"))
}

fn obstruct(ctx: &Context, alpha: Option<&VectorArg>, expect: Option<ObstructionExpect>) -> Result<Outcome> {
    let r = base(ctx)?;
    let t = Tower::top(&ctx.algebra, r)?;
    let qspace = t.quotient.space();
    let fspace = t.full.space();
    let mut details = obj(vec![("tower_layer", t.n.into())]);
    match alpha {
        Some(arg) => {
            let v = arg.parse(ctx.field, qspace)?;
            let o = t.o2(&v)?;
            details.insert("alpha".into(), t.quotient.render(&v).into());
            details.insert("vanishes".into(), o.vanishes.into());
            details.insert("representative".into(), terms(fspace, &o.representative));
            details.insert("class".into(), coords(&o.class));
            details.insert("lift_independent".into(), o.lift_independent.into());
            if let Some(l) = &o.lift {
                details.insert("lift".into(), t.full.render(l).into());
            }
            let matches = match expect {
                None => true,
                Some(ObstructionExpect::Vanishes) => o.vanishes,
                Some(ObstructionExpect::Obstructed) => !o.vanishes,
            };
            let passed = matches && o.lift_independent;
            let witness = (!passed).then(|| {
                json!({
                    "alpha": t.quotient.render(&v),
                    "representative": terms(fspace, &o.representative),
                    "class": coords(&o.class),
                    "lift_independent": o.lift_independent,
                })
            });
            Ok(Outcome::new(passed, details, witness).with_reason(passed, "obstruction differs from the expectation"))
        }
        None => {
            let below = t.quotient.enumerate_mc()?;
            let above = t.full.enumerate_mc()?;
            let liftable: HashSet<SparseVec> = above.iter().map(|a| t.project(a)).collect();
            let mut vanishing = 0;
            let mut witness = None;
            for v in &below {
                let o = t.o2(v)?;
                vanishing += o.vanishes as usize;
                let brute = liftable.contains(v);
                if (o.vanishes != brute || !o.lift_independent) && witness.is_none() {
                    witness = Some(json!({
                        "alpha": t.quotient.render(v),
                        "o2_vanishes": o.vanishes,
                        "brute_force_liftable": brute,
                        "lift_independent": o.lift_independent,
                        "representative": terms(fspace, &o.representative),
                    }));
                }
            }
            details.insert("quotient_mc_count".into(), below.len().into());
            details.insert("mc_count".into(), above.len().into());
            details.insert("liftable".into(), liftable.len().into());
            details.insert("o2_vanishing".into(), vanishing.into());
            let passed = witness.is_none();
            Ok(Outcome::new(passed, details, witness).with_reason(passed, "o₂ disagrees with brute-force lifting"))
        }
    }
}

fn coords(v: &SparseVec) -> Value {
    v.iter().map(|(i, c)| json!([i, c.to_decimal()])).collect()
}

fn lift(ctx: &Context, alpha: &VectorArg, expect: Option<LiftExpect>) -> Result<Outcome> {
    let r = base(ctx)?;
    let s = McSetting::new(&ctx.algebra, r)?;
    let v = alpha.parse(ctx.field, s.space())?;
    let out = lift_mc(&ctx.algebra, r, &v)?;
    let mut details = obj(vec![("alpha", s.render(&v).into())]);
    let lifted = match &out {
        LiftOutcome::Lifted(l) => {
            details.insert("outcome".into(), "lifted".into());
            details.insert("lift".into(), s.render(l).into());
            true
        }
        LiftOutcome::Obstructed {
            level,
            representative,
            class,
        } => {
            details.insert("outcome".into(), "obstructed".into());
            details.insert("level".into(), (*level).into());
            details.insert("representative".into(), terms(s.space(), representative));
            details.insert("class".into(), coords(class));
            false
        }
    };
    let passed = match expect {
        None => true,
        Some(LiftExpect::Lifts) => lifted,
        Some(LiftExpect::Obstructed) => !lifted,
    };
    let witness = (!passed).then(|| details.get("representative").or_else(|| details.get("lift")).cloned().unwrap_or_default());
    Ok(Outcome::new(passed, details, witness).with_reason(passed, "lifting differs from the expectation"))
}

fn prorep(ctx: &Context, order: Option<usize>, expect_count: Option<usize>) -> Result<Outcome> {
    let r = base(ctx)?;
    let commutative = r.is_commutative();
    let rep = if commutative {
        prorep_compare(&ctx.algebra, r, order)?
    } else {
        prorep_compare_noncomm(&ctx.algebra, r, order)?
    };
    let s = McSetting::new(&ctx.algebra, r)?;
    let rspace = r.alg().space();
    let maps: Vec<Value> = rep
        .maps
        .iter()
        .take(LISTING_LIMIT)
        .map(|images| images.iter().map(|v| Value::from(rspace.render(v))).collect())
        .collect();
    let reps: Vec<SparseVec> = rep.pi0.representatives.iter().map(|&i| rep.pi0.elements[i].clone()).collect();
    let details = obj(vec![
        ("order", rep.order.into()),
        ("mode", if commutative { "commutative" } else { "modulo-conjugation" }.into()),
        ("generators", rep.presentation.generator_labels.clone().into()),
        ("relations", rep.presentation.relations.len().into()),
        ("h0_weight_dims", rep.presentation.weight_dims.clone().into()),
        ("algebra_maps", rep.maps.len().into()),
        ("maps", maps.into()),
        ("orbit_of", rep.orbit_of.clone().into()),
        ("mc_count", rep.pi0.elements.len().into()),
        ("pi0_representatives", listing(s.space(), &reps)),
        ("induced", rep.induced.clone().into()),
        ("matching", json!(rep.matching)),
        ("lhs", rep.lhs.into()),
        ("rhs", rep.rhs.into()),
        ("bijective", rep.bijective.into()),
    ]);
    let mut witness = None;
    if !(rep.bijective && rep.lhs == rep.rhs) {
        witness = Some(json!({"lhs": rep.lhs, "rhs": rep.rhs, "matching": rep.matching}));
    } else if let Some(w) = count_mismatch(expect_count, rep.lhs) {
        witness = Some(w);
    }
    let passed = witness.is_none();
    Ok(Outcome::new(passed, details, witness).with_reason(passed, "the two sides are not in bijection"))
}

fn model(ctx: &Context, arity: usize) -> Result<Outcome> {
    let c = &ctx.algebra;
    let m = match minimal_model(c, arity) {
        Err(Error::Structural(msg)) => {
            let details = obj(vec![("arity", arity.into())]);
            let out = Outcome::new(false, details, Some(json!({"certification": msg})));
            return Ok(out.with_reason(false, "the transferred structure fails certification"));
        }
        other => other?,
    };
    let mismatch = m.tree_sum_mismatch(c, arity)?;
    let inclusion: Map<String, Value> = (0..m.algebra.dim())
        .map(|k| {
            let v = m.morphism.f(&[k]);
            (m.algebra.label(k).to_string(), terms(c.space(), &v))
        })
        .collect();
    let details = obj(vec![
        ("arity", arity.into()),
        ("model", serde_json::to_value(desc_from_algebra(&m.algebra)).expect("descriptions serialize")),
        ("higher_arities", m.higher_arities().into()),
        ("inclusion", Value::Object(inclusion)),
        ("tree_sums_agree", mismatch.is_none().into()),
    ]);
    let witness = mismatch.map(|t| json!({"tree_sum_mismatch_at": labels(m.algebra.space(), &t)}));
    let passed = witness.is_none();
    Ok(Outcome::new(passed, details, witness).with_reason(passed, "tree sums disagree with the recursion"))
}

fn invariance(ctx: &Context, arity: usize) -> Result<Outcome> {
    let r = base(ctx)?;
    let m = minimal_model(&ctx.algebra, arity)?;
    let rep = invariance_check(&m.morphism, r)?;
    let details = obj(vec![
        ("arity", arity.into()),
        ("mc_source", rep.mc_source.into()),
        ("mc_target", rep.mc_target.into()),
        ("pi0_source", rep.pi0_source.into()),
        ("pi0_target", rep.pi0_target.into()),
        ("pi0_bijective", rep.pi0_bijective.into()),
        ("pairs_checked", rep.pairs_checked.into()),
    ]);
    let witness = (!rep.passed).then(|| {
        json!({
            "pi0_bijective": rep.pi0_bijective,
            "hom_mismatches": rep.hom_mismatches.iter().map(|(i, j, a, b)| json!([i, j, a.to_string(), b.to_string()])).collect::<Vec<_>>(),
            "hom_complex_mismatches": json!(rep.hom_complex_mismatches),
        })
    });
    Ok(Outcome::new(rep.passed, details, witness).with_reason(rep.passed, "f* is not an equivalence"))
}

fn properties(
    ctx: &Context,
    order: Option<usize>,
    stasheff_arity: Option<usize>,
    samples: Option<usize>,
) -> Result<Outcome> {
    let r = base(ctx)?;
    let mut cfg = SuiteConfig {
        seed: ctx.seed,
        order: order.unwrap_or(ctx.truncation),
        ..SuiteConfig::default()
    };
    if let Some(n) = stasheff_arity {
        cfg.stasheff_arity = n;
    }
    if let Some(n) = samples {
        cfg.samples = n;
    }
    let rep = property_suite(&ctx.algebra, r, &cfg)?;
    let checks: Vec<Value> = rep
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "applicable": c.applicable,
                "passed": c.passed,
                "instances": c.instances,
            })
        })
        .collect();
    let details = obj(vec![
        ("order", cfg.order.into()),
        ("stasheff_arity", cfg.stasheff_arity.into()),
        ("properties", checks.into()),
        ("samples", rep.samples.clone().into()),
    ]);
    let failures = rep.failures();
    let witness = (!failures.is_empty()).then(|| {
        failures
            .iter()
            .map(|c| json!({"name": c.name, "witness": c.witness}))
            .collect::<Value>()
    });
    let passed = rep.passed();
    Ok(Outcome::new(passed, details, witness).with_reason(passed, "a property fails"))
}

fn module(ctx: &Context, alpha: &VectorArg, arity: usize) -> Result<Outcome> {
    let s = McSetting::new(&ctx.algebra, base(ctx)?)?;
    let v = alpha.parse(ctx.field, s.space())?;
    let m = twisted_module(&s, &v)?;
    let mut details = obj(vec![("alpha", s.render(&v).into()), ("dim", m.dim().into())]);
    let mut witness = m.d_squared_failure().map(|(i, w)| {
        json!({"identity": "d²", "element": m.space().label(i), "value": terms(m.space(), &w)})
    });
    if witness.is_none() {
        witness = m.axiom_failure(arity).map(|(t, w)| {
            json!({"identity": "module", "inputs": t, "residual": terms(m.space(), &w)})
        });
    }
    details.insert("checked_arity".into(), arity.into());
    let passed = witness.is_none();
    Ok(Outcome::new(passed, details, witness).with_reason(passed, "the twisted module fails an identity"))
}
