use super::*;
use crate::ainfty::builtins::{kpoints, massey, ngr, xy, xy_acyclic};
use crate::artin::trunc_poly;
use crate::field::Scalar;
use crate::mc::{invariance_check, McSetting, Pushforward};
use crate::testutil::{random_assoc, rng};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn f2() -> Field {
    Field::prime(2).unwrap()
}

/// A random complex: pairs `e ↦ f` and free cocycles in a standard
/// basis, conjugated by a degree-preserving unitriangular change of basis.
fn random_complex(g: &mut ChaCha8Rng, field: Field, dim: usize) -> Complex {
    let mut degs = Vec::new();
    let mut std_d: Vec<SparseVec> = Vec::new();
    while degs.len() < dim {
        let k = g.random_range(-1..=2);
        if degs.len() + 2 <= dim && g.random_bool(0.5) {
            let j = degs.len();
            degs.push(k);
            degs.push(k + 1);
            std_d.push(SparseVec::unit(j + 1, field));
            std_d.push(SparseVec::new());
        } else {
            degs.push(k);
            std_d.push(SparseVec::new());
        }
    }
    let mut change = LinearMap::identity(field, dim);
    for j in 0..dim {
        for i in 0..j {
            if degs[i] == degs[j] && g.random_bool(0.5) {
                change.cols[j].add_term(i, &field.from_i64(g.random_range(-2..=2)));
            }
        }
    }
    // The inverse of a unitriangular matrix by back substitution.
    let solver = change.solver();
    let inv = LinearMap::new(
        field,
        dim,
        (0..dim).map(|j| solver.solve(&SparseVec::unit(j, field)).unwrap()).collect(),
    );
    let d0 = LinearMap::new(field, dim, std_d);
    let d = change.compose(&d0).compose(&inv);
    let space = GradedSpace::new(degs.iter().enumerate().map(|(i, &k)| (format!("e{i}"), k))).unwrap();
    Complex::new(field, space, d).unwrap()
}

#[test]
fn minimal_complex_splits_trivially() {
    let a = kpoints(Field::Rational, 2).unwrap();
    let s = build_splitting(&a.m1_complex().unwrap()).unwrap();
    assert_eq!(s.i, LinearMap::identity(Field::Rational, a.dim()));
    assert_eq!(s.p, LinearMap::identity(Field::Rational, a.dim()));
    assert!(s.h.is_zero());
}

#[test]
fn acyclic_pair_splits_by_the_inverse_differential() {
    let space = GradedSpace::from_strs(&[("u", 1), ("v", 2)]).unwrap();
    let q = Field::Rational;
    let d = LinearMap::new(q, 2, vec![SparseVec::unit(1, q).scaled(&q.from_i64(3)), SparseVec::new()]);
    let s = build_splitting(&Complex::new(q, space, d).unwrap()).unwrap();
    assert_eq!(s.harmonic_dim(), 0);
    assert!(s.h.cols[0].is_zero());
    assert_eq!(s.h.cols[1], SparseVec::unit(0, q).scaled(&q.from_i64(3).inv().unwrap()));
    assert!(s.identity_failure().is_none());
}

#[test]
fn random_splittings_satisfy_the_side_conditions() {
    let mut g = rng(11);
    for field in [Field::Rational, f2(), Field::prime(5).unwrap()] {
        for _ in 0..30 {
            let dim = g.random_range(1..=12);
            let c = random_complex(&mut g, field, dim);
            let s = build_splitting(&c).unwrap();
            assert_eq!(s.identity_failure(), None);
            assert!(s.degrees_ok());
            let betti: usize = c.betti().values().sum();
            assert_eq!(s.harmonic_dim(), betti);
        }
    }
}

#[test]
fn splitting_is_deterministic() {
    let c = massey(Field::Rational).unwrap().m1_complex().unwrap();
    let a = build_splitting(&c).unwrap();
    let b = build_splitting(&c).unwrap();
    assert_eq!((a.i, a.p, a.h), (b.i, b.p, b.h));
}

#[test]
fn formal_input_is_its_own_model() {
    for a in [kpoints(Field::Rational, 2).unwrap(), ngr(Field::Rational, 3, 1).unwrap()] {
        let m = minimal_model(&a, 4).unwrap();
        assert_eq!(m.algebra.dim(), a.dim());
        assert!(m.higher_arities().is_empty());
        for (k, v) in a.ops().entries(2) {
            let key: Vec<usize> = k.iter().map(|&x| model_index(&m, x)).collect();
            let want = v.reindexed(|g| Some(model_index(&m, g))).unwrap();
            assert_eq!(m.algebra.m(&key), want);
        }
        assert!(m.morphism.max_arity() <= 1);
    }
}

/// Model index of a basis element of a minimal input, whose harmonic
/// basis is the input basis in degree order.
fn model_index(m: &MinimalModel, x: usize) -> usize {
    let u = m.morphism.target.unit().unwrap();
    if x == u {
        return 0;
    }
    (1..m.algebra.dim())
        .find(|&k| m.morphism.f(&[k]) == SparseVec::unit(x, m.algebra.field()))
        .unwrap()
}

#[test]
fn xy_with_acyclic_pair_recovers_the_square() {
    for field in [Field::Rational, f2(), Field::prime(3).unwrap()] {
        let c = xy_acyclic(field).unwrap();
        let m = minimal_model(&c, 4).unwrap();
        let a = &m.algebra;
        assert_eq!(a.dim(), 3);
        let x = a.space().try_index("[x]").unwrap();
        let y = a.space().try_index("[y]").unwrap();
        assert_eq!(a.m(&[x, x]), SparseVec::unit(y, field));
        assert!(m.higher_arities().is_empty());
        assert!(a.is_minimal());
        assert_eq!(m.cohomology_matrix(), LinearMap::identity(field, 3));
        assert_eq!(m.tree_sum_mismatch(&c, 4).unwrap(), None);
    }
}

#[test]
fn massey_product_appears_as_m3() {
    let c = massey(Field::Rational).unwrap();
    let m = minimal_model(&c, 4).unwrap();
    let a = &m.algebra;
    let idx = |l: &str| a.space().try_index(l).unwrap();
    let (ia, ib, ic, iz) = (idx("[a]"), idx("[b]"), idx("[c]"), idx("[z]"));
    assert!(a.m(&[ia, ib]).is_zero());
    assert!(a.m(&[ib, ic]).is_zero());
    let m3 = a.m(&[ia, ib, ic]);
    assert_eq!(m3.indices().collect::<Vec<_>>(), vec![iz]);
    assert_eq!(m.higher_arities(), vec![3]);
    assert_eq!(m.tree_sum_mismatch(&c, 4).unwrap(), None);
    assert_eq!(m.cohomology_matrix(), LinearMap::identity(Field::Rational, a.dim()));
}

#[test]
fn ngr_with_acyclic_pair_is_formal() {
    let base = ngr(Field::Rational, 3, 1).unwrap();
    let c = with_acyclic_pair(&base, 1, "u").unwrap();
    let m = minimal_model(&c, 4).unwrap();
    assert_eq!(m.algebra.dim(), base.dim());
    assert!(m.higher_arities().is_empty());
    // the quadratic product agrees with the original one
    for (k, v) in base.ops().entries(2) {
        let key: Vec<usize> = k.iter().map(|&x| model_index(&m, x)).collect();
        let want = v.reindexed(|g| Some(model_index(&m, g))).unwrap();
        assert_eq!(m.algebra.m(&key), want);
    }
}

#[test]
fn random_dg_algebras_transfer() {
    let mut g = rng(3);
    for _ in 0..10 {
        let a = random_assoc(&mut g, f2(), 4);
        let c = with_acyclic_pair(&a, 1, "u").unwrap();
        let m = minimal_model(&c, 4).unwrap();
        assert_eq!(m.algebra.dim(), m.splitting.harmonic_dim() + 1);
        assert_eq!(m.tree_sum_mismatch(&c, 3).unwrap(), None);
    }
}

#[test]
fn arity_bound_below_two_is_refused() {
    let c = xy_acyclic(Field::Rational).unwrap();
    assert!(matches!(minimal_model(&c, 1), Err(Error::OutOfRange(_))));
    let not_aug = c.forget_unit();
    assert!(matches!(minimal_model(&not_aug, 3), Err(Error::Hypothesis(_))));
}

fn reduce(v: &SparseVec, p: Field) -> SparseVec {
    let mut out = SparseVec::new();
    for (i, c) in v.iter() {
        let Scalar::Rational(r) = c else { panic!("rational input") };
        let den = p.from_bigint(r.denom()).inv().expect("denominator prime to p");
        out.add_term(i, &(&p.from_bigint(r.numer()) * &den));
    }
    out
}

#[test]
fn transfer_commutes_with_reduction_mod_p() {
    for p in [3u64, 5, 7] {
        let fp = Field::prime(p).unwrap();
        let mq = minimal_model(&massey(Field::Rational).unwrap(), 4).unwrap();
        let mp = minimal_model(&massey(fp).unwrap(), 4).unwrap();
        for (k, v) in mq.algebra.ops().all_entries() {
            assert_eq!(reduce(v, fp), mp.algebra.m(k));
        }
        for (k, v) in mq.morphism.comps().all_entries() {
            assert_eq!(reduce(v, fp), mp.morphism.f(k));
        }
    }
}

#[test]
fn transferred_morphisms_push_mc_elements_forward() {
    let r = trunc_poly(f2(), 3, 0).unwrap();
    for c in [xy_acyclic(f2()).unwrap(), massey(f2()).unwrap()] {
        let m = minimal_model(&c, 4).unwrap();
        let push = Pushforward::new(&m.morphism, &r).unwrap();
        let s = McSetting::new(&m.algebra, &r).unwrap();
        for alpha in s.enumerate_mc().unwrap() {
            let beta = push.object(&alpha).unwrap();
            assert!(push.target.is_mc(&beta).unwrap());
        }
    }
}

#[test]
fn invariance_for_transferred_quasi_isomorphisms() {
    let r = trunc_poly(f2(), 3, 0).unwrap();
    for c in [xy_acyclic(f2()).unwrap(), massey(f2()).unwrap()] {
        let m = minimal_model(&c, 4).unwrap();
        let rep = invariance_check(&m.morphism, &r).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.pi0_source, rep.pi0_target);
    }
}

#[test]
fn sequential_and_parallel_transfer_agree() {
    let c = massey(f2()).unwrap();
    let a = minimal_model_with(&c, 4, Exec::Sequential).unwrap();
    let b = minimal_model_with(&c, 4, Exec::Parallel).unwrap();
    assert_eq!(a.algebra.ops(), b.algebra.ops());
    assert_eq!(a.morphism.comps(), b.morphism.comps());
}

#[test]
fn planar_tree_counts_are_catalan() {
    let counts: Vec<usize> = (1..=6).map(|n| planar_trees(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 5, 14, 42]);
}

#[test]
fn acyclic_pair_keeps_cohomology() {
    let a = xy(Field::Rational).unwrap();
    let c = with_acyclic_pair(&a, 1, "u").unwrap();
    assert_eq!(a.m1_complex().unwrap().betti(), {
        let mut b = c.m1_complex().unwrap().betti();
        b.retain(|_, v| *v > 0);
        b
    });
    assert!(c.check_axioms(3).unwrap().passed());
}
