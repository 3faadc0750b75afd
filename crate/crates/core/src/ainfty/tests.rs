use super::builtins::*;
use super::*;
use crate::field::Field;
use crate::graded::GradedSpace;
use crate::linalg::SparseVec;
use crate::testutil;

const Q: Field = Field::Rational;

fn f2() -> Field {
    Field::prime(2).unwrap()
}

fn trunc_poly(field: Field, n: usize) -> AInfAlgebra {
    // k[t]/tⁿ in degree 0
    let labels: Vec<(String, i64)> = (0..n)
        .map(|i| match i {
            0 => ("1".to_string(), 0),
            1 => ("t".to_string(), 0),
            _ => (format!("t^{i}"), 0),
        })
        .collect();
    let mut b = AlgebraBuilder::new(field, GradedSpace::new(labels).unwrap());
    for i in 1..n {
        for j in 1..n {
            if i + j < n {
                b.add_op(vec![i, j], &SparseVec::unit(i + j, field));
            }
        }
    }
    b.unit_with_laws("1").unwrap().augmented().build().unwrap()
}

#[test]
fn builtins_satisfy_stasheff_identities() {
    for f in [Q, f2(), Field::prime(3).unwrap()] {
        for a in [
            kpoints(f, 2).unwrap(),
            kpoints(f, 3).unwrap(),
            njac(f, 2).unwrap(),
            xy(f).unwrap(),
            xy_acyclic(f).unwrap(),
            massey(f).unwrap(),
            ngr(f, 3, 1).unwrap(),
            ngr(f, 4, 2).unwrap(),
        ] {
            assert!(a.check_axioms(4).unwrap().passed());
            a.check_unit().unwrap();
            a.check_augmentation().unwrap();
        }
    }
}

#[test]
fn spurious_triple_product_on_xy() {
    let a = xy(Q).unwrap();
    let mut ops = a.ops().clone();
    ops.add_term(vec![1, 1, 1], 2, &Q.one());
    let b = a.with_ops(ops).unwrap();
    // The n = 3 identity only involves m₁ and m₂ against m₃; with m₁ = 0
    // the triple product is unconstrained there.  At n = 4 the terms
    // m₂(m₃, 1) and m₃(m₂, …) land in degree 3, which is zero.
    let rep = b.check_axioms(5).unwrap();
    assert!(rep.passed());
    assert!(b.check_unit().is_ok());
}

#[test]
fn failing_identity_is_reported_with_witness() {
    // Non-associative: (aa)a = ba = a while a(aa) = ab = 0.
    let s = GradedSpace::from_strs(&[("a", 0), ("b", 0)]).unwrap();
    let a = AInfAlgebra::builder(Q, s)
        .op(&["a", "a"], &[("b", 1)])
        .unwrap()
        .op(&["b", "a"], &[("a", 1)])
        .unwrap()
        .build()
        .unwrap();
    match a.check_axioms(3).unwrap() {
        AxiomReport::Fail { n, inputs, residual } => {
            assert_eq!(n, 3);
            assert_eq!(inputs.len(), 3);
            assert!(!residual.is_zero());
        }
        AxiomReport::Pass { .. } => panic!("expected failure"),
    }
}

#[test]
fn wrong_degree_rejected_before_evaluation() {
    let s = GradedSpace::from_strs(&[("x", 1), ("y", 2)]).unwrap();
    let r = AInfAlgebra::builder(Q, s).op(&["x", "x"], &[("x", 1)]).unwrap().build();
    assert!(matches!(r, Err(crate::Error::Structural(_))));
}

#[test]
fn bar_and_stasheff_residuals_agree_up_to_sign() {
    // For arbitrary degree-correct maps the two evaluation paths compute the
    // same residual up to a sign depending only on the input tuple.
    for seed in 0..20 {
        let mut r = testutil::rng(seed);
        let s = testutil::random_space(&mut r, 3, -1, 2);
        let ops = testutil::random_maps(&mut r, Q, &s, &s, 3, 0.5, |n| 2 - n as i64);
        let a = AInfAlgebra::from_parts(Q, s, ops, None, false).unwrap();
        let b = a.b_from_m();
        for n in 1..=4 {
            for k in 0..a.dim().pow(n as u32) {
                let t = algebra::decode_tuple(k, a.dim(), n);
                let m = a.stasheff_residual(&t);
                let bb = a.bar_residual(&b, &t);
                assert!(
                    bb == m || bb == m.neg(),
                    "seed {seed}, tuple {t:?}: {m:?} vs {bb:?}"
                );
            }
        }
    }
}

#[test]
fn suspension_round_trip() {
    let a = massey(Q).unwrap();
    assert_eq!(&a.m_from_b(&a.b_from_m()), a.ops());
    let z = AInfAlgebra::from_parts(Q, a.space().clone(), StructureMaps::new(), None, false).unwrap();
    assert_eq!(z.b_from_m().nnz(), 0);
}

#[test]
fn identity_morphism_passes() {
    for a in [xy(Q).unwrap(), massey(Q).unwrap(), kpoints(f2(), 2).unwrap()] {
        let rep = AInfMorphism::identity(&a).check(4).unwrap();
        assert!(rep.report.passed());
        assert_eq!(rep.unchecked_from, None);
    }
}

#[test]
fn strict_algebra_map_passes_and_bad_map_fails() {
    // The projection k[t]/t³ → k[t]/t² is an algebra map.
    let a = trunc_poly(Q, 3);
    let b = trunc_poly(Q, 2);
    let f1 = crate::linalg::LinearMap::new(
        Q,
        2,
        vec![SparseVec::unit(0, Q), SparseVec::unit(1, Q), SparseVec::new()],
    );
    let f = AInfMorphism::strict(a.clone(), b.clone(), &f1).unwrap();
    assert!(f.check(3).unwrap().report.passed());
    // t ↦ 2t is linear but not multiplicative on k[t]/t³ → k[t]/t³.
    let c = trunc_poly(Q, 3);
    let g1 = crate::linalg::LinearMap::new(
        Q,
        3,
        vec![
            SparseVec::unit(0, Q),
            SparseVec::unit(1, Q).scaled(&Q.from_i64(2)),
            SparseVec::unit(2, Q),
        ],
    );
    let g = AInfMorphism::strict(a, c, &g1).unwrap();
    assert!(!g.check(3).unwrap().report.passed());
}

#[test]
fn morphism_signs_match_suspended_identity() {
    // With random components, the printed residual of the morphism identity
    // agrees up to sign with the sign-free identity on suspensions.
    for seed in 0..20 {
        let mut r = testutil::rng(100 + seed);
        let a = testutil::random_assoc(&mut r, Q, 3).forget_unit();
        let comps = testutil::random_maps(&mut r, Q, a.space(), a.space(), 2, 0.5, |n| 1 - n as i64);
        let f = AInfMorphism::new(a.clone(), a.clone(), comps, false).unwrap();
        let ft = f.suspended();
        let b = a.b_from_m();
        for n in 1..=3 {
            for k in 0..a.dim().pow(n as u32) {
                let t = algebra::decode_tuple(k, a.dim(), n);
                let printed = f.residual(&t);
                let susp = suspended_morphism_residual(&a, &b, &ft, &t);
                assert!(printed == susp || printed == susp.neg(), "seed {seed} {t:?}");
            }
        }
    }
}

fn suspended_morphism_residual(
    a: &AInfAlgebra,
    b: &StructureMaps,
    ft: &StructureMaps,
    t: &[usize],
) -> SparseVec {
    let n = t.len();
    let shifted: Vec<i64> = t.iter().map(|&i| a.degree(i) - 1).collect();
    let mut out = SparseVec::new();
    for blocks in morphism::compositions(n) {
        let mut args = Vec::new();
        let mut pos = 0;
        for &i in &blocks {
            args.push(ft.get(&t[pos..pos + i]).cloned().unwrap_or_default());
            pos += i;
        }
        let refs: Vec<&SparseVec> = args.iter().collect();
        out.add(&b.eval(&refs, Q));
    }
    for s in 1..=n {
        for r in 0..=(n - s) {
            let Some(inner) = b.get(&t[r..r + s]) else { continue };
            let sg = Q.sign(crate::signs::block_sign(1, &shifted, r));
            for (j, c) in inner.iter() {
                let mut outer = t[..r].to_vec();
                outer.push(j);
                outer.extend_from_slice(&t[r + s..]);
                if let Some(v) = ft.get(&outer) {
                    out.add_scaled(v, &(-&(c * &sg)));
                }
            }
        }
    }
    out
}

#[test]
fn composition_of_morphisms_is_a_morphism() {
    let a = massey(Q).unwrap();
    let id = AInfMorphism::identity(&a);
    let g = id.then(&id).unwrap();
    assert_eq!(g.comps(), id.comps());
}

#[test]
fn unitize_examples() {
    let zero = AInfAlgebra::from_parts(Q, GradedSpace::new(Vec::new()).unwrap(), StructureMaps::new(), None, false).unwrap();
    let u = zero.unitize();
    assert_eq!(u.dim(), 1);
    u.check_unit().unwrap();

    let s = GradedSpace::from_strs(&[("x", 1)]).unwrap();
    let a = AInfAlgebra::from_parts(Q, s, StructureMaps::new(), None, false).unwrap();
    let u = a.unitize();
    assert_eq!(u.dim(), 2);
    assert_eq!(u.ops().nnz(), 3);
    assert!(u.check_axioms(6).unwrap().passed());
}

#[test]
fn unitize_then_restrict_is_identity_and_passes() {
    for seed in 0..10 {
        let mut r = testutil::rng(200 + seed);
        let a = testutil::random_assoc(&mut r, Q, 4).restrict_to_ideal().unwrap();
        let u = a.unitize();
        assert!(u.check_axioms(4).unwrap().passed());
        u.check_unit().unwrap();
        assert_eq!(u.restrict_to_ideal().unwrap().ops(), a.ops());
    }
    let m = massey(Q).unwrap().restrict_to_ideal().unwrap();
    assert!(m.unitize().check_axioms(4).unwrap().passed());
}

#[test]
fn non_standard_augmentation_is_rebased() {
    // k × k = k[e]/(e² − e) augmented by ε(e) = 1.
    let s = GradedSpace::from_strs(&[("1", 0), ("e", 0)]).unwrap();
    let aug = SparseVec::from_pairs([(0, Q.one()), (1, Q.one())]);
    let r = AInfAlgebra::builder(Q, s)
        .op(&["e", "e"], &[("e", 1)])
        .unwrap()
        .unit_with_laws("1")
        .unwrap()
        .augmentation(aug)
        .build()
        .unwrap();
    assert!(r.check_axioms(3).unwrap().passed());
    // e' = e − 1: e'e' = e − 2e + 1 = 1 − e = −e'.
    assert_eq!(r.m(&[1, 1]), SparseVec::unit(1, Q).neg());
}

#[test]
fn tensor_with_trivial_factors() {
    let a = xy(Q).unwrap();
    let k = trunc_poly(Q, 1);
    let ak = tensor_with_dg(&a, &k).unwrap();
    assert_eq!(ak.dim(), a.dim());
    assert_eq!(ak.ops().nnz(), a.ops().nnz());
    let ka = tensor_with_dg(&trunc_poly(Q, 1), &trunc_poly(Q, 3)).unwrap();
    assert_eq!(ka.ops().nnz(), trunc_poly(Q, 3).ops().nnz());
}

#[test]
fn tensor_xy_with_dual_numbers() {
    let a = xy(Q).unwrap();
    let c = trunc_poly(Q, 2);
    let ac = tensor_with_dg(&a, &c).unwrap();
    assert!(ac.check_axioms(5).unwrap().passed());
    ac.check_unit().unwrap();
    let xt = ac.space().index_of("x⊗t").unwrap();
    assert!(ac.m(&[xt, xt]).is_zero());
    let x1 = ac.space().index_of("x⊗1").unwrap();
    let yt = ac.space().index_of("y⊗t").unwrap();
    assert_eq!(ac.m(&[x1, xt]), SparseVec::unit(yt, Q));
}

#[test]
fn tensor_property_random() {
    for seed in 0..15 {
        let mut r = testutil::rng(300 + seed);
        let a = testutil::random_assoc(&mut r, Q, 3);
        let c = testutil::random_assoc(&mut r, Q, 2);
        let ac = tensor_with_dg(&a, &c).unwrap();
        assert!(ac.check_axioms(4).unwrap().passed(), "seed {seed}");
    }
    let ac = tensor_with_dg(&massey(Q).unwrap(), &xy_acyclic(Q).unwrap()).unwrap();
    assert!(ac.check_axioms(3).unwrap().passed());
}

#[test]
fn tensor_rejects_higher_operations() {
    let a = xy(Q).unwrap();
    let mut ops = a.ops().clone();
    ops.add_term(vec![1, 1, 1], 2, &Q.one());
    let b = a.with_ops(ops).unwrap();
    assert!(matches!(tensor_with_dg(&a, &b), Err(crate::Error::Hypothesis(_))));
}

#[test]
fn cohomology_algebra_examples() {
    let a = xy(Q).unwrap();
    let h = a.cohomology_algebra().unwrap();
    assert_eq!(h.algebra.dim(), 3);
    assert_eq!(h.algebra.ops().nnz(), a.ops().nnz());

    let h = xy_acyclic(Q).unwrap().cohomology_algebra().unwrap();
    assert_eq!(h.algebra.dim(), 3);
    assert!(h.algebra.check_axioms(3).unwrap().passed());
    assert_eq!(h.algebra.unit(), Some(0));

    let h = massey(Q).unwrap().cohomology_algebra().unwrap();
    // Classes: 1, a, b, c, z (p and q are exact; u, v are not closed).
    assert_eq!(h.algebra.dim(), 5);
    assert!(h.algebra.check_axioms(3).unwrap().passed());
    // ab and bc vanish in cohomology.
    assert!(h.algebra.m(&[1, 2]).is_zero());
}

#[test]
fn acyclic_has_zero_cohomology() {
    let s = GradedSpace::from_strs(&[("u", 1), ("v", 2)]).unwrap();
    let a = AInfAlgebra::builder(Q, s).op(&["u"], &[("v", 1)]).unwrap().build().unwrap();
    assert_eq!(a.cohomology_algebra().unwrap().algebra.dim(), 0);
}

#[test]
fn sequential_and_parallel_checks_agree() {
    let a = massey(Q).unwrap();
    let s = a.check_axioms_with(4, crate::Exec::Sequential).unwrap();
    let p = a.check_axioms_with(4, crate::Exec::Parallel).unwrap();
    assert_eq!(s, p);
}

#[test]
fn builtin_ids_parse() {
    assert_eq!(builtin(Q, "njac(2)").unwrap().dim(), 3);
    assert_eq!(builtin(Q, "kpoints(2)").unwrap().dim(), 4);
    assert_eq!(builtin(Q, "ngr(3,1)").unwrap().dim(), 1 + 2 + 1);
    assert!(builtin(Q, "nope").is_err());
    let k2 = kpoints(Q, 2).unwrap();
    let x1 = k2.space().index_of("x1").unwrap();
    let x2 = k2.space().index_of("x2").unwrap();
    let x12 = k2.space().index_of("x1x2").unwrap();
    assert_eq!(k2.m(&[x1, x2]), SparseVec::unit(x12, Q));
    assert_eq!(k2.m(&[x2, x1]), SparseVec::unit(x12, Q).neg());
    assert!(k2.m(&[x1, x1]).is_zero());
}
