//! The A∞-algebra `A⊗C` for a DG algebra `C`.

use std::collections::HashMap;

use crate::ainfty::algebra::{AInfAlgebra, AlgebraBuilder};
use crate::error::{Error, Result};
use crate::graded::GradedSpace;
use crate::linalg::SparseVec;
use crate::signs;

/// Basis index of `a⊗c` in `A⊗C`.
#[inline]
pub fn tensor_index(ia: usize, ic: usize, dim_c: usize) -> usize {
    ia * dim_c + ic
}

/// Splits a basis index of `A⊗C`.
#[inline]
pub fn tensor_split(i: usize, dim_c: usize) -> (usize, usize) {
    (i / dim_c, i % dim_c)
}

/// The tensor basis with labels `a⊗c` and degrees `|a| + |c|`.
pub fn tensor_space(a: &GradedSpace, c: &GradedSpace) -> GradedSpace {
    let mut basis = Vec::with_capacity(a.dim() * c.dim());
    for i in 0..a.dim() {
        for j in 0..c.dim() {
            basis.push((
                format!("{}⊗{}", a.label(i), c.label(j)),
                a.degree(i) + c.degree(j),
            ));
        }
    }
    GradedSpace::new(basis).expect("tensor labels are unique")
}

/// `v ⊗ w` in the tensor basis.
pub fn tensor_vectors(v: &SparseVec, w: &SparseVec, dim_c: usize) -> SparseVec {
    let mut out = SparseVec::new();
    for (i, a) in v.iter() {
        for (j, b) in w.iter() {
            out.add_term(tensor_index(i, j, dim_c), &(a * b));
        }
    }
    out
}

/// Nonzero iterated products `c_1⋯c_n` over basis tuples of `C`, found by
/// depth-first search pruning zero prefixes.
pub(crate) fn c_products(c: &AInfAlgebra, n: usize) -> Vec<(Vec<usize>, SparseVec)> {
    let mut out = Vec::new();
    let mut tuple = Vec::with_capacity(n);
    for j in 0..c.dim() {
        tuple.push(j);
        dfs(c, n, &mut tuple, SparseVec::unit(j, c.field()), &mut out);
        tuple.pop();
    }
    out
}

fn dfs(
    c: &AInfAlgebra,
    n: usize,
    tuple: &mut Vec<usize>,
    prod: SparseVec,
    out: &mut Vec<(Vec<usize>, SparseVec)>,
) {
    if tuple.len() == n {
        out.push((tuple.clone(), prod));
        return;
    }
    for j in 0..c.dim() {
        let next = c.m_vec(&[&prod, &SparseVec::unit(j, c.field())]);
        if next.is_zero() {
            continue;
        }
        tuple.push(j);
        dfs(c, n, tuple, next, out);
        tuple.pop();
    }
}

/// `A⊗C` with `m₁ = m₁⊗1 + 1⊗d` (Koszul signed) and, for `n ≥ 2`,
/// `m_n(a_1⊗c_1, …, a_n⊗c_n) = (−1)^{Σ_{i<j}|a_j||c_i|} m_n(a_1,…,a_n)⊗c_1⋯c_n`.
pub fn tensor_with_dg(a: &AInfAlgebra, c: &AInfAlgebra) -> Result<AInfAlgebra> {
    if !c.is_dg() {
        return Err(Error::Hypothesis("second factor must be a DG algebra".into()));
    }
    if a.field() != c.field() {
        return Err(Error::MixedField(a.field(), c.field()));
    }
    let fld = a.field();
    let dc = c.dim();
    let space = tensor_space(a.space(), c.space());
    let mut b = AlgebraBuilder::new(fld, space);
    // m₁
    for ia in 0..a.dim() {
        for ic in 0..dc {
            let mut v = tensor_vectors(&a.m(&[ia]), &SparseVec::unit(ic, fld), dc);
            let dcv = c.m(&[ic]);
            if !dcv.is_zero() {
                let w = tensor_vectors(&SparseVec::unit(ia, fld), &dcv, dc);
                v.add_scaled(&w, &fld.sign(a.degree(ia)));
            }
            b.add_op(vec![tensor_index(ia, ic, dc)], &v);
        }
    }
    let mut cache: HashMap<usize, Vec<(Vec<usize>, SparseVec)>> = HashMap::new();
    for n in 2..=a.ops().max_arity() {
        let entries: Vec<_> = a.ops().entries(n).collect();
        if entries.is_empty() {
            continue;
        }
        let prods = cache.entry(n).or_insert_with(|| c_products(c, n));
        for (ka, va) in entries {
            let adeg: Vec<i64> = ka.iter().map(|&i| a.degree(i)).collect();
            for (kc, pc) in prods.iter() {
                let cdeg: Vec<i64> = kc.iter().map(|&j| c.degree(j)).collect();
                let e = signs::interchange_sign(&adeg, &cdeg);
                let inputs: Vec<usize> = ka
                    .iter()
                    .zip(kc)
                    .map(|(&i, &j)| tensor_index(i, j, dc))
                    .collect();
                let v = tensor_vectors(va, pc, dc).scaled(&fld.sign(e));
                b.add_op(inputs, &v);
            }
        }
    }
    let mut b = b.arity_bound(a.arity_bound());
    if let (Some(ua), Some(uc)) = (a.unit(), c.unit()) {
        b = b.unit(&format!("{}⊗{}", a.label(ua), c.label(uc)))?;
        if a.is_augmented() && c.is_augmented() {
            b = b.augmented();
        }
    }
    b.build()
}
