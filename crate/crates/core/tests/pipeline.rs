//! End-to-end runs through the public API: validation, bar constructions,
//! Maurer–Cartan sets, obstructions, comparison and transfer.

use stasheff::ainfty::builtins::{builtin, massey, njac, xy};
use stasheff::ainfty::{AInfAlgebra, AlgebraBuilder};
use stasheff::artin::{builtin_base, trunc_poly};
use stasheff::bar::{koszul_probe, s_hat_cohomology, BarTruncation, KoszulVerdict};
use stasheff::graded::GradedSpace;
use stasheff::mc::{invariance_check, lift_mc, LiftOutcome, McSetting, MC_ENUMERATION_CAP};
use stasheff::properties::{property_suite, SuiteConfig};
use stasheff::random::{random_assoc, rng};
use stasheff::transfer::minimal_model;
use stasheff::twist::prorep_compare;
use stasheff::{Exec, Field};

fn f2() -> Field {
    Field::prime(2).unwrap()
}

#[test]
fn njac1_from_validation_to_comparison() {
    let a = njac(f2(), 1).unwrap();
    assert!(a.check_axioms(5).unwrap().passed());
    let bar = BarTruncation::new(&a, 3).unwrap();
    assert!(bar.d_squared_failure().is_none());
    let probe = koszul_probe(&a, 3, None).unwrap();
    assert_eq!(probe.verdict, KoszulVerdict::KoszulAtOrder(3));
    let r = trunc_poly(f2(), 3, 0).unwrap();
    let s = McSetting::new(&a, &r).unwrap();
    assert_eq!(s.enumerate_mc().unwrap().len(), 4);
    assert_eq!(s.pi0().unwrap().count(), 4);
    let rep = prorep_compare(&a, &r, None).unwrap();
    assert!(rep.bijective);
    assert_eq!((rep.lhs, rep.rhs), (4, 4));
}

#[test]
fn hand_built_exterior_algebra_matches_the_builtin() {
    let q = Field::Rational;
    let space = GradedSpace::from_strs(&[("1", 0), ("x1", 1), ("x2", 1), ("x1x2", 2)]).unwrap();
    let a: AInfAlgebra = AlgebraBuilder::new(q, space)
        .op(&["x1", "x2"], &[("x1x2", 1)])
        .unwrap()
        .op(&["x2", "x1"], &[("x1x2", -1)])
        .unwrap()
        .unit_with_laws("1")
        .unwrap()
        .augmented()
        .build()
        .unwrap();
    assert_eq!(a, builtin(q, "kpoints(2)").unwrap());
    let c = s_hat_cohomology(&a, 3).unwrap();
    assert_eq!(c.h0.weight_dims, vec![1, 2, 3, 4]);
    assert!(c.h0.generators_commute());
}

#[test]
fn xy_obstruction_over_the_rationals() {
    let q = Field::Rational;
    let a = xy(q).unwrap();
    let r = trunc_poly(q, 3, 0).unwrap();
    let s = McSetting::new(&a, &r).unwrap();
    let x_t = s.vector(&[("x⊗t", 1)]).unwrap();
    match lift_mc(&a, &r, &x_t).unwrap() {
        LiftOutcome::Obstructed { level, representative, .. } => {
            assert_eq!(level, 2);
            assert_eq!(representative, s.vector(&[("y⊗t^2", 1)]).unwrap());
        }
        other => panic!("expected an obstruction, got {other:?}"),
    }
    let y_t2 = s.vector(&[("x⊗t^2", 1)]).unwrap();
    let x_t2 = s.vector(&[("x⊗t^2", 3)]).unwrap();
    assert!(s.is_mc(&y_t2).unwrap() && s.is_mc(&x_t2).unwrap());
}

#[test]
fn transfer_and_invariance_for_massey() {
    let r = trunc_poly(f2(), 2, 0).unwrap();
    let m = minimal_model(&massey(f2()).unwrap(), 4).unwrap();
    assert_eq!(m.higher_arities(), vec![3]);
    let rep = invariance_check(&m.morphism, &r).unwrap();
    assert!(rep.passed);
}

#[test]
fn execution_policies_agree_on_enumeration() {
    let a = njac(f2(), 2).unwrap();
    let r = builtin_base(f2(), "trunc(3)").unwrap();
    let s = McSetting::new(&a, &r).unwrap();
    let seq = s.enumerate_mc_with(Exec::Sequential, MC_ENUMERATION_CAP).unwrap();
    let par = s.enumerate_mc_with(Exec::Parallel, MC_ENUMERATION_CAP).unwrap();
    assert_eq!(seq, par);
    assert_eq!(seq.len(), 16);
}

#[test]
fn seeded_random_instances_satisfy_the_property_suite() {
    let f3 = Field::prime(3).unwrap();
    for seed in 100..104 {
        let a = random_assoc(&mut rng(seed), f3, 3);
        let r = builtin_base(f3, "trunc(3)").unwrap();
        let cfg = SuiteConfig {
            stasheff_arity: 4,
            seed,
            ..SuiteConfig::default()
        };
        let rep = property_suite(&a, &r, &cfg).unwrap();
        assert!(rep.passed(), "seed {seed}: {:?}", rep.failures());
    }
}
