//! Seeded random instances for property checks.
//!
//! Everything is driven by a caller-supplied ChaCha8 generator, so a seed
//! reproduces the same instances on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ainfty::{AInfAlgebra, AlgebraBuilder};
use crate::field::Field;
use crate::graded::GradedSpace;
use crate::linalg::SparseVec;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random graded-commutative-free associative algebra: a quotient of a
/// path-like monomial algebra, built as strictly upper-triangular products
/// `e_i e_j = ± e_k` with `k > max(i, j)`, checked for associativity.
pub fn random_assoc(r: &mut ChaCha8Rng, field: Field, dim: usize) -> AInfAlgebra {
    loop {
        let mut basis = vec![("1".to_string(), 0)];
        let mut deg = 0;
        let mut degs = Vec::new();
        for i in 0..dim {
            deg += r.random_range(0..=1);
            if i == 0 {
                deg = deg.max(1);
            }
            degs.push(deg);
            basis.push((format!("e{i}"), deg));
        }
        let space = GradedSpace::new(basis).unwrap();
        let mut b = AlgebraBuilder::new(field, space.clone());
        for i in 1..=dim {
            for j in 1..=dim {
                let d = space.degree(i) + space.degree(j);
                let outs: Vec<usize> = space
                    .in_degree(d)
                    .into_iter()
                    .filter(|&k| k > i.max(j))
                    .collect();
                if outs.is_empty() || !r.random_bool(0.4) {
                    continue;
                }
                let o = outs[r.random_range(0..outs.len())];
                b.add_op(vec![i, j], &SparseVec::unit(o, field).scaled(&field.from_i64(r.random_range(1..=2))));
            }
        }
        let a = b.unit_with_laws("1").unwrap().augmented().build().unwrap();
        if a.check_axioms(3).unwrap().passed() {
            return a;
        }
    }
}

/// A uniformly random element of the span of the given basis vectors,
/// with coefficients drawn from `−2..=2`.
pub fn random_combination(r: &mut ChaCha8Rng, field: Field, basis: &[usize]) -> SparseVec {
    let mut v = SparseVec::new();
    for &i in basis {
        v.add_term(i, &field.from_i64(r.random_range(-2..=2)));
    }
    v
}
