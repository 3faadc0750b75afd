use super::*;
use crate::ainfty::builtins::{kpoints, massey, njac, xy};
use crate::artin::{builtin_base, nc_xy, trunc_poly};
use crate::testutil::rng;
use rand::Rng;

fn f2() -> Field {
    Field::prime(2).unwrap()
}

fn f3() -> Field {
    Field::prime(3).unwrap()
}

fn setting(a: AInfAlgebra, r: &str) -> McSetting {
    let r = builtin_base(a.field(), r).unwrap();
    McSetting::new(&a, &r).unwrap()
}

/// Finite-field settings covering classical, graded and non-commutative
/// bases.
fn golden() -> Vec<McSetting> {
    vec![
        setting(xy(f2()).unwrap(), "trunc(3)"),
        setting(njac(f2(), 1).unwrap(), "trunc(3)"),
        setting(njac(f2(), 2).unwrap(), "trunc(2)"),
        setting(kpoints(f3(), 2).unwrap(), "trunc(3,-1)"),
        setting(kpoints(f2(), 1).unwrap(), "dual_odd"),
        setting(njac(f2(), 1).unwrap(), "nc_xy"),
        setting(xy(f3()).unwrap(), "trunc(3,-1)"),
        setting(massey(f2()).unwrap(), "trunc(2)"),
    ]
}

fn random_object(s: &McSetting, g: &mut impl Rng) -> SparseVec {
    let f = s.field();
    let mut v = SparseVec::new();
    for i in s.ideal_basis(1) {
        v.add_term(i, &f.from_i64(g.random_range(-2..=2)));
    }
    v
}

#[test]
fn zero_cochain() {
    let s = setting(xy(Field::Rational).unwrap(), "trunc(3)");
    let t = cochain_from_mc(&s, &SparseVec::new()).unwrap();
    assert!(t.values.iter().all(|v| v.is_zero()));
    assert!(t.admissible);
    assert!(mc_from_cochain(&s, &t).unwrap().is_zero());
}

#[test]
fn cochain_round_trip_on_every_mc_element() {
    for s in golden() {
        for alpha in s.enumerate_mc().unwrap() {
            let t = cochain_from_mc(&s, &alpha).unwrap();
            assert!(t.values[s.base().unit()].is_zero());
            assert_eq!(mc_from_cochain(&s, &t).unwrap(), alpha);
        }
    }
}

#[test]
fn njac_cochain_unfolds_the_pairing() {
    let s = setting(njac(f2(), 1).unwrap(), "trunc(3)");
    let alpha = s.vector(&[("x⊗t", 1)]).unwrap();
    let t = cochain_from_mc(&s, &alpha).unwrap();
    let tj = s.base().alg().space().try_index("t").unwrap();
    let x = s.algebra().space().try_index("x").unwrap();
    for (j, v) in t.values.iter().enumerate() {
        if j == tj {
            assert_eq!(*v, SparseVec::unit(x, f2()));
        } else {
            assert!(v.is_zero());
        }
    }
}

#[test]
fn non_mc_elements_are_not_cochains() {
    let s = setting(xy(Field::Rational).unwrap(), "trunc(3)");
    let a = s.vector(&[("x⊗t", 1)]).unwrap();
    assert!(matches!(cochain_from_mc(&s, &a), Err(Error::NotMaurerCartan(_))));
    let t = cochain_of(&s, &a);
    assert!(matches!(mc_from_cochain(&s, &t), Err(Error::NotMaurerCartan(_))));
}

#[test]
fn convolution_residual_matches_the_mc_residual() {
    let mut g = rng(5);
    let mut settings = golden();
    settings.push(setting(massey(Field::Rational).unwrap(), "trunc(3,-1)"));
    settings.push(setting(kpoints(Field::Rational, 2).unwrap(), "dual_odd"));
    for s in settings {
        for _ in 0..15 {
            let alpha = random_object(&s, &mut g);
            let t = cochain_of(&s, &alpha);
            assert_eq!(
                t.convolution_residual(&s),
                s.mc_residual(&alpha).unwrap(),
                "{}",
                s.render(&alpha)
            );
        }
    }
}

#[test]
fn zero_cochain_corepresents_the_augmentation() {
    let s = setting(njac(f2(), 2).unwrap(), "trunc(3)");
    let shat = Shat::new(s.algebra(), 3).unwrap();
    let t = cochain_from_mc(&s, &SparseVec::new()).unwrap();
    let g = corepresenting_hom(&s, &shat, &t).unwrap();
    assert_eq!(g.images[0], SparseVec::unit(s.base().unit(), f2()));
    assert!(g.images[1..].iter().all(|v| v.is_zero()));
}

#[test]
fn njac_corepresenting_hom_sends_words_to_powers() {
    let s = setting(njac(f2(), 1).unwrap(), "trunc(3)");
    let shat = Shat::new(s.algebra(), 3).unwrap();
    let alpha = s.vector(&[("x⊗t", 1)]).unwrap();
    let g = corepresenting_hom(&s, &shat, &cochain_from_mc(&s, &alpha).unwrap()).unwrap();
    let r = s.base().alg().space();
    let x = s.algebra().space().try_index("x").unwrap();
    let w1 = shat.bar().index_of(&[x]).unwrap();
    let w2 = shat.bar().index_of(&[x, x]).unwrap();
    let w3 = shat.bar().index_of(&[x, x, x]).unwrap();
    assert_eq!(g.images[w1], SparseVec::unit(r.try_index("t").unwrap(), f2()));
    assert_eq!(g.images[w2], SparseVec::unit(r.try_index("t^2").unwrap(), f2()));
    assert!(g.images[w3].is_zero());
}

#[test]
fn corepresenting_homs_are_certified_on_every_mc_element() {
    for s in golden() {
        let n = s.nu();
        let shat = Shat::new(s.algebra(), n).unwrap();
        let big = Shat::new(s.algebra(), n + 1).unwrap();
        for alpha in s.enumerate_mc().unwrap() {
            let t = cochain_from_mc(&s, &alpha).unwrap();
            if !t.admissible {
                assert!(matches!(corepresenting_hom(&s, &shat, &t), Err(Error::Hypothesis(_))));
                continue;
            }
            let g = corepresenting_hom(&s, &shat, &t).unwrap();
            assert_eq!(g.pushed_universal_cochain(&s, &shat).unwrap(), alpha);
            let gb = corepresenting_hom(&s, &big, &t).unwrap();
            assert!(gb.factors_through_tower(&big, &g, &shat));
        }
    }
}

#[test]
fn small_truncation_breaks_multiplicativity() {
    let s = setting(njac(f2(), 1).unwrap(), "trunc(3)");
    let alpha = s.vector(&[("x⊗t", 1)]).unwrap();
    let t = cochain_from_mc(&s, &alpha).unwrap();
    let shat = Shat::new(s.algebra(), 1).unwrap();
    assert!(matches!(corepresenting_hom(&s, &shat, &t), Err(Error::Hypothesis(_))));
    let shat = Shat::new(s.algebra(), 2).unwrap();
    assert!(corepresenting_hom(&s, &shat, &t).is_ok());
}

#[test]
fn non_admissible_cochains_are_refused() {
    let s = setting(xy(Field::Rational).unwrap(), "trunc(2,-1)");
    let tau = TwistingCochain {
        values: vec![SparseVec::new(), SparseVec::unit(0, Field::Rational)],
        admissible: false,
    };
    let shat = Shat::new(s.algebra(), 2).unwrap();
    assert!(matches!(corepresenting_hom(&s, &shat, &tau), Err(Error::Hypothesis(_))));
}

#[test]
fn untwisted_module_is_the_tensor_product() {
    for s in golden() {
        let m = twisted_module(&s, &SparseVec::new()).unwrap();
        assert_eq!(m.differential(), s.tensor().m1_map());
    }
}

#[test]
fn xy_twisted_differential() {
    let s = setting(xy(f3()).unwrap(), "trunc(3)");
    let alpha = s.vector(&[("x⊗t^2", 1)]).unwrap();
    let m = twisted_module(&s, &alpha).unwrap();
    let x1 = s.space().try_index("x⊗1").unwrap();
    let got = m.op(&[x1]);
    let plain = s.tensor().m(&[x1]);
    let mut extra = got.clone();
    extra.sub(&plain);
    assert_eq!(extra, s.vector(&[("y⊗t^2", 1)]).unwrap());
    assert!(m.d_squared_failure().is_none());
}

#[test]
fn twisted_modules_satisfy_the_module_axioms() {
    for s in golden() {
        for alpha in s.enumerate_mc().unwrap().iter().take(6) {
            let m = twisted_module(&s, alpha).unwrap();
            assert!(m.axiom_failure(3).is_none());
            assert!(m.r_linearity_failure(&s).is_none());
            let c = twisted_comodule(&s, alpha).unwrap();
            assert!(c.d_squared_failure().is_none());
            assert!(c.axiom_failure(3).is_none());
        }
    }
}

#[test]
fn module_square_zero_iff_maurer_cartan() {
    for s in [
        setting(xy(f2()).unwrap(), "trunc(3)"),
        setting(massey(f2()).unwrap(), "trunc(2)"),
        setting(xy(f3()).unwrap(), "trunc(3)"),
    ] {
        let basis: Vec<SparseVec> = s
            .ideal_basis(1)
            .into_iter()
            .map(|i| SparseVec::unit(i, s.field()))
            .collect();
        let mut both = [0usize; 2];
        for alpha in enumerate_span(s.field(), &basis).unwrap() {
            let mc = s.is_mc(&alpha).unwrap();
            let m = TwistedModule::build(&s, &alpha).unwrap();
            assert_eq!(m.d_squared_failure().is_none(), mc);
            let c = TwistedModule::build_dual(&s, &alpha).unwrap();
            assert_eq!(c.d_squared_failure().is_none(), mc);
            both[mc as usize] += 1;
            if !mc {
                assert!(matches!(twisted_module(&s, &alpha), Err(Error::NotMaurerCartan(_))));
            }
        }
        assert!(both[0] > 0 && both[1] > 0);
    }
}

#[test]
fn gauge_equivalences_give_module_isomorphisms() {
    let mut nontrivial = 0;
    for s in [
        setting(njac(f2(), 1).unwrap(), "nc_xy"),
        setting(njac(f3(), 2).unwrap(), "trunc(2)"),
        setting(xy(f2()).unwrap(), "trunc(3,-1)"),
    ] {
        let mc = s.enumerate_mc().unwrap();
        for a in mc.iter().take(5) {
            for b in mc.iter().take(5) {
                for g in s.hom(a, b).unwrap().orbits().unwrap() {
                    let map = gauge_module_map(&s, a, b, &g, 3).unwrap();
                    assert!(map.invertible);
                    assert!(map.identity_failure.is_none());
                    if a != b {
                        nontrivial += 1;
                    }
                }
            }
        }
    }
    assert!(nontrivial > 0);
}

#[test]
fn gauge_map_rejects_non_morphisms() {
    let s = setting(njac(f2(), 1).unwrap(), "trunc(3)");
    let a = s.vector(&[("x⊗t", 1)]).unwrap();
    let one = s.unit_vector();
    assert!(gauge_module_map(&s, &SparseVec::new(), &a, &one, 2).is_err());
}

#[test]
fn universal_deformation_specializes_along_corepresenting_homs() {
    for (a, r, n) in [
        (njac(f2(), 1).unwrap(), "trunc(3)", 3),
        (kpoints(f3(), 2).unwrap(), "trunc(2)", 2),
        (xy(f3()).unwrap(), "trunc(3,-1)", 3),
    ] {
        let base = builtin_base(a.field(), r).unwrap();
        let (shat, su, tau_a, e) = universal_deformation(&a, n).unwrap();
        assert!(su.is_mc(&tau_a).unwrap());
        assert!(e.axiom_failure(2).is_none());
        let s = McSetting::new(&a, &base).unwrap();
        for alpha in s.enumerate_mc().unwrap() {
            let t = cochain_from_mc(&s, &alpha).unwrap();
            let g = corepresenting_hom(&s, &shat, &t).unwrap();
            let m = twisted_module(&s, &alpha).unwrap();
            let push = |v: &SparseVec| {
                let mut out = SparseVec::new();
                for (i, c) in v.iter() {
                    let (x, w) = su.split(i);
                    out.add_scaled(&s.tensor_of(&SparseVec::unit(x, a.field()), &g.images[w]), c);
                }
                out
            };
            for arity in 1..=e.arity() {
                for tail in a_tuples(a.dim(), arity - 1) {
                    for i in 0..e.dim() {
                        let mut key = vec![i];
                        key.extend_from_slice(&tail);
                        let lhs = push(&e.op(&key));
                        let rhs = m.op_vec(&push(&SparseVec::unit(i, a.field())), &tail);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}

#[test]
fn presentations_of_h0() {
    let shat = Shat::new(&njac(Field::Rational, 2).unwrap(), 3).unwrap();
    let p = h0_presentation(&shat).unwrap();
    assert_eq!(p.weight_dims, vec![1, 2, 4, 8]);
    assert!(p.relations.is_empty());
    assert!(!p.commutative);
    let shat = Shat::new(&kpoints(Field::Rational, 2).unwrap(), 3).unwrap();
    let p = h0_presentation(&shat).unwrap();
    assert_eq!(p.weight_dims, vec![1, 2, 3, 4]);
    assert!(p.commutative);
    // words of length ≤ 3 in two letters: 15, classes: 10
    assert_eq!(p.words.len(), 15);
    assert_eq!(p.relations.len(), 5);
}

#[test]
fn prorep_examples() {
    let r3 = trunc_poly(f2(), 3, 0).unwrap();
    let r2 = trunc_poly(f2(), 2, 0).unwrap();
    let k = trunc_poly(f2(), 1, 0).unwrap();
    let rep = prorep_compare(&njac(f2(), 1).unwrap(), &r3, None).unwrap();
    assert_eq!((rep.lhs, rep.rhs), (4, 4));
    assert!(rep.bijective);
    let rep = prorep_compare(&njac(f2(), 1).unwrap(), &k, None).unwrap();
    assert_eq!((rep.lhs, rep.rhs), (1, 1));
    assert!(rep.bijective);
    let rep = prorep_compare(&kpoints(f2(), 2).unwrap(), &r2, None).unwrap();
    assert_eq!((rep.lhs, rep.rhs), (4, 4));
    assert!(rep.bijective);
    let rep = prorep_compare(&njac(f2(), 2).unwrap(), &r2, None).unwrap();
    assert_eq!((rep.lhs, rep.rhs), (4, 4));
    assert!(rep.bijective);
    let rep = prorep_compare(&njac(f2(), 2).unwrap(), &r3, None).unwrap();
    assert_eq!((rep.lhs, rep.rhs), (16, 16));
    assert!(rep.bijective);
}

#[test]
fn prorep_commutative_orbits_are_singletons() {
    let r3 = trunc_poly(f3(), 3, 0).unwrap();
    let rep = prorep_compare(&kpoints(f3(), 2).unwrap(), &r3, None).unwrap();
    assert_eq!(rep.lhs, rep.maps.len());
    assert!(rep.bijective);
}

#[test]
fn prorep_is_independent_of_the_truncation_order() {
    let r3 = trunc_poly(f2(), 3, 0).unwrap();
    for a in [njac(f2(), 1).unwrap(), kpoints(f2(), 2).unwrap()] {
        let lo = prorep_compare(&a, &r3, Some(3)).unwrap();
        let hi = prorep_compare(&a, &r3, Some(4)).unwrap();
        assert_eq!((lo.lhs, lo.rhs), (hi.lhs, hi.rhs));
        let lo_maps: Vec<_> = lo.induced.iter().map(|&k| lo.maps[k].clone()).collect();
        let hi_maps: Vec<_> = hi.induced.iter().map(|&k| hi.maps[k].clone()).collect();
        assert_eq!(lo_maps, hi_maps);
    }
}

#[test]
fn prorep_is_natural_in_the_base() {
    let r3 = trunc_poly(f2(), 3, 0).unwrap();
    assert!(prorep_naturality(&njac(f2(), 1).unwrap(), &r3, 2, 3).unwrap());
    assert!(prorep_naturality(&kpoints(f2(), 2).unwrap(), &r3, 2, 3).unwrap());
    assert!(prorep_naturality(&njac(f2(), 2).unwrap(), &r3, 2, 3).unwrap());
}

#[test]
fn section_choice_does_not_matter() {
    let s = setting(kpoints(f2(), 2).unwrap(), "trunc(3)");
    let shat = Shat::new(s.algebra(), 3).unwrap();
    let p = h0_presentation(&shat).unwrap();
    let boundaries: Vec<SparseVec> = shat
        .alg()
        .space()
        .in_degree(-1)
        .into_iter()
        .map(|i| shat.alg().m(&[i]))
        .collect();
    for alpha in s.enumerate_mc().unwrap() {
        let t = cochain_from_mc(&s, &alpha).unwrap();
        let g = corepresenting_hom(&s, &shat, &t).unwrap();
        for rep in &p.generator_reps {
            for b in &boundaries {
                assert_eq!(g.apply(&rep.sum(b)), g.apply(rep));
            }
        }
    }
}

#[test]
fn noncommutative_comparison() {
    let r = nc_xy(f2()).unwrap();
    let a = njac(f2(), 1).unwrap();
    assert!(matches!(prorep_compare(&a, &r, None), Err(Error::Hypothesis(_))));
    let rep = prorep_compare_noncomm(&a, &r, None).unwrap();
    assert_eq!(rep.maps.len(), 8);
    assert!(rep.lhs < rep.maps.len());
    assert_eq!(rep.lhs, rep.rhs);
    assert!(rep.bijective);
    let r3 = trunc_poly(f2(), 3, 0).unwrap();
    let comm = prorep_compare_noncomm(&a, &r3, None).unwrap();
    assert_eq!(comm.lhs, comm.maps.len());
}

#[test]
fn prorep_hypothesis_gates() {
    let r2 = trunc_poly(f2(), 2, 0).unwrap();
    let r3 = trunc_poly(f2(), 3, 0).unwrap();
    let odd = builtin_base(f2(), "dual_odd").unwrap();
    let a = njac(f2(), 1).unwrap();
    assert!(matches!(prorep_compare(&a, &odd, None), Err(Error::Hypothesis(_))));
    assert!(matches!(prorep_compare(&a, &r3, Some(2)), Err(Error::Hypothesis(_))));
    let non_admissible = r2.alg().clone();
    assert!(matches!(prorep_compare(&non_admissible, &r2, None), Err(Error::Hypothesis(_))));
    let q = njac(Field::Rational, 1).unwrap();
    let rq = trunc_poly(Field::Rational, 2, 0).unwrap();
    assert!(prorep_compare(&q, &rq, None).is_err());
}
