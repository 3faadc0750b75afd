//! Homotopy transfer of a finite-dimensional augmented DG algebra to its
//! cohomology.
//!
//! A splitting of the underlying complex consists of an inclusion
//! `i: H → C`, a projection `p: C → H` and a homotopy `h` of degree −1
//! with `dh + hd = 1 − ip`, `h² = 0`, `hi = 0`, `ph = 0`.  On the
//! suspension, with `b₁ = −d` and `H = −h`, the recursion
//!
//! ```text
//! λ_n = Σ_{k+l=n} b₂(F_k ⊗ F_l),   F₁ = i,   F_n = h∘λ_n,
//! ```
//!
//! produces the transferred operations `b_n = p∘λ_n` and the suspended
//! components `f̃_n = F_n` of an A∞-quasi-isomorphism `H → C`.  All maps
//! `F_k` have degree 0 on suspended elements, so the recursion carries no
//! Koszul signs.  The unit is handled by transferring the augmentation
//! ideal and unitizing the result, which makes both the model and the
//! morphism strictly unital.

use std::collections::HashMap;

use crate::ainfty::algebra::{decode_tuple, tuple_count};
use crate::ainfty::{AInfAlgebra, AInfMorphism, AlgebraBuilder, AxiomReport, StructureMaps};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::graded::{Complex, GradedSpace};
use crate::linalg::{Echelon, LinearMap, SparseVec};
use crate::signs;

/// A harmonious splitting `(i, p, h)` of a finite complex.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub field: Field,
    pub space: GradedSpace,
    pub d: LinearMap,
    /// Basis of `H`, one element per representative cocycle.
    pub harmonic: GradedSpace,
    pub i: LinearMap,
    pub p: LinearMap,
    pub h: LinearMap,
}

/// Deterministic splitting from pivot choices.  In every degree `k` the
/// complement `W^k` of the cocycles is spanned by those standard basis
/// vectors whose differentials are independent of the earlier ones, the
/// boundaries are `B^{k+1} = d(W^k)`, and `H^k` is spanned by the
/// cohomology representatives.  Then `h(d w) = w` on `B`, `h = 0` on
/// `H ⊕ W`, and `p` reads off the `H`-coordinates.
pub fn build_splitting(c: &Complex) -> Result<Splitting> {
    let field = c.field;
    let dim = c.space.dim();
    let mut w_of: HashMap<i64, Vec<usize>> = HashMap::new();
    let mut b_of: HashMap<i64, Vec<SparseVec>> = HashMap::new();
    let Some((lo, hi)) = c.space.support() else {
        let zero = |r, n| LinearMap::zero(field, r, n);
        return Ok(Splitting {
            field,
            space: c.space.clone(),
            d: c.d.clone(),
            harmonic: GradedSpace::new(Vec::<(String, i64)>::new())?,
            i: zero(0, 0),
            p: zero(0, 0),
            h: zero(0, 0),
        });
    };
    for k in lo..=hi {
        let mut image = Echelon::new(field, dim);
        let mut ws = Vec::new();
        let mut bs = Vec::new();
        for j in c.space.in_degree(k) {
            let dj = c.d.cols[j].clone();
            if image.insert(&dj) {
                ws.push(j);
                bs.push(dj);
            }
        }
        w_of.insert(k, ws);
        b_of.insert(k + 1, bs);
    }
    let mut harmonic_basis: Vec<(String, i64)> = Vec::new();
    let mut i_cols: Vec<SparseVec> = Vec::new();
    let mut p_cols = vec![SparseVec::new(); dim];
    let mut h_cols = vec![SparseVec::new(); dim];
    for k in lo..=hi {
        let slice = c.space.in_degree(k);
        let pos: HashMap<usize, usize> = slice.iter().enumerate().map(|(a, &g)| (g, a)).collect();
        let local = |v: &SparseVec| v.reindexed(|g| pos.get(&g).copied()).expect("homogeneous");
        let bs = b_of.remove(&k).unwrap_or_default();
        let ws_prev = w_of.get(&(k - 1)).cloned().unwrap_or_default();
        let reps = c.cohomology(k).reps;
        let ws = &w_of[&k];
        let mut cols: Vec<SparseVec> = bs.iter().map(local).collect();
        cols.extend(reps.iter().map(local));
        cols.extend(ws.iter().map(|&g| SparseVec::unit(pos[&g], field)));
        if cols.len() != slice.len() {
            return Err(Error::Structural(format!(
                "splitting in degree {k} has {} vectors for a slice of dimension {}",
                cols.len(),
                slice.len()
            )));
        }
        let solver = LinearMap::new(field, slice.len(), cols).solver();
        let offset = i_cols.len();
        let nb = bs.len();
        let nh = reps.len();
        for (a, &g) in slice.iter().enumerate() {
            let x = solver
                .solve(&SparseVec::unit(a, field))
                .ok_or_else(|| Error::Structural(format!("splitting in degree {k} is singular")))?;
            let mut pv = SparseVec::new();
            let mut hv = SparseVec::new();
            for (q, coef) in x.iter() {
                if q < nb {
                    hv.add_term(ws_prev[q], coef);
                } else if q < nb + nh {
                    pv.add_term(offset + q - nb, coef);
                }
            }
            p_cols[g] = pv;
            h_cols[g] = hv;
        }
        for r in reps {
            let lead = r.leading().expect("nonzero representative").0;
            let mut l = format!("[{}]", c.space.label(lead));
            while harmonic_basis.iter().any(|(x, _)| *x == l) {
                l.push('\'');
            }
            harmonic_basis.push((l, k));
            i_cols.push(r);
        }
    }
    let nh = i_cols.len();
    Ok(Splitting {
        field,
        space: c.space.clone(),
        d: c.d.clone(),
        harmonic: GradedSpace::new(harmonic_basis)?,
        i: LinearMap::new(field, dim, i_cols),
        p: LinearMap::new(field, nh, p_cols),
        h: LinearMap::new(field, dim, h_cols),
    })
}

impl Splitting {
    pub fn harmonic_dim(&self) -> usize {
        self.harmonic.dim()
    }

    /// The first of the five splitting identities that fails, if any.
    pub fn identity_failure(&self) -> Option<&'static str> {
        let n = self.space.dim();
        let id = LinearMap::identity(self.field, n);
        let dh = self.d.compose(&self.h);
        let hd = self.h.compose(&self.d);
        let ip = self.i.compose(&self.p);
        for j in 0..n {
            let mut lhs = dh.cols[j].sum(&hd.cols[j]);
            lhs.add(&ip.cols[j]);
            if lhs != id.cols[j] {
                return Some("dh + hd = 1 − ip");
            }
        }
        if !self.h.compose(&self.h).is_zero() {
            return Some("h² = 0");
        }
        if !self.h.compose(&self.i).is_zero() {
            return Some("hi = 0");
        }
        if !self.p.compose(&self.h).is_zero() {
            return Some("ph = 0");
        }
        if self.p.compose(&self.i) != LinearMap::identity(self.field, self.harmonic_dim()) {
            return Some("pi = 1");
        }
        None
    }

    /// Whether `i`, `p` have degree 0 and `h` degree −1.
    pub fn degrees_ok(&self) -> bool {
        let hom = |m: &LinearMap, src: &GradedSpace, dst: &GradedSpace, shift: i64| {
            m.cols
                .iter()
                .enumerate()
                .all(|(j, v)| dst.is_homogeneous_of(v, src.degree(j) + shift))
        };
        hom(&self.i, &self.harmonic, &self.space, 0)
            && hom(&self.p, &self.space, &self.harmonic, 0)
            && hom(&self.h, &self.space, &self.space, -1)
    }
}

/// The suspended recursion data on the harmonic part of a non-unital DG
/// algebra: `b_n = p∘λ_n` and `F_n` for `n ≤ arity_max`.
#[derive(Clone, Debug)]
struct Recursion {
    b: StructureMaps,
    f: StructureMaps,
}

fn recursion(c: &AInfAlgebra, s: &Splitting, arity_max: usize, exec: Exec) -> Result<Recursion> {
    let field = c.field();
    let b2 = bilinear_b2(c);
    let nh = s.harmonic_dim();
    let mut f = StructureMaps::new();
    let mut b = StructureMaps::new();
    for x in 0..nh {
        f.set(vec![x], s.i.cols[x].clone());
    }
    for n in 2..=arity_max {
        let count = tuple_count(nh, n)?;
        let rows: Vec<(Vec<usize>, SparseVec, SparseVec)> = exec.map_range(count, |k| {
            let t = decode_tuple(k, nh, n);
            let mut lambda = SparseVec::new();
            for split in 1..n {
                let (Some(l), Some(r)) = (f.get(&t[..split]), f.get(&t[split..])) else {
                    continue;
                };
                lambda.add(&b2.eval(&[l, r], field));
            }
            let bv = s.p.apply(&lambda);
            let fv = s.h.apply(&lambda);
            (t, bv, fv)
        });
        for (t, bv, fv) in rows {
            if !bv.is_zero() {
                b.set(t.clone(), bv);
            }
            if !fv.is_zero() {
                f.set(t, fv);
            }
        }
    }
    Ok(Recursion { b, f })
}

/// `b₂` of a DG algebra as a table on basis pairs.
fn bilinear_b2(c: &AInfAlgebra) -> StructureMaps {
    let mut two = StructureMaps::new();
    for (k, v) in c.b_from_m().entries(2) {
        two.set(k.clone(), v.clone());
    }
    two
}

/// A planar binary tree with unlabelled leaves.
#[derive(Clone, Debug)]
enum Tree {
    Leaf,
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    fn leaves(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }
}

fn planar_trees(n: usize) -> Vec<Tree> {
    if n == 1 {
        return vec![Tree::Leaf];
    }
    let mut out = Vec::new();
    for k in 1..n {
        for l in planar_trees(k) {
            for r in planar_trees(n - k) {
                out.push(Tree::Node(Box::new(l.clone()), Box::new(r.clone())));
            }
        }
    }
    out
}

/// Value of a tree on harmonic inputs: leaves are `i`, vertices `b₂`,
/// internal edges `h`.  The root edge is left open.
fn eval_tree(tree: &Tree, inputs: &[usize], b2: &StructureMaps, s: &Splitting) -> SparseVec {
    match tree {
        Tree::Leaf => s.i.cols[inputs[0]].clone(),
        Tree::Node(l, r) => {
            let k = l.leaves();
            let edge = |t: &Tree, xs: &[usize]| match t {
                Tree::Leaf => eval_tree(t, xs, b2, s),
                _ => s.h.apply(&eval_tree(t, xs, b2, s)),
            };
            let lv = edge(l, &inputs[..k]);
            let rv = edge(r, &inputs[k..]);
            b2.eval(&[&lv, &rv], s.field)
        }
    }
}

/// The transferred suspended operation `b_n = Σ_T p(T)` on a harmonic
/// tuple, as an explicit sum over planar binary trees.
fn tree_sum_b(c: &AInfAlgebra, s: &Splitting, t: &[usize]) -> (SparseVec, SparseVec) {
    let b2 = bilinear_b2(c);
    let mut total = SparseVec::new();
    for tree in planar_trees(t.len()) {
        total.add(&eval_tree(&tree, t, &b2, s));
    }
    (s.p.apply(&total), s.h.apply(&total))
}

/// A minimal model `A` of an augmented DG algebra `𝒞` together with the
/// strictly unital quasi-isomorphism `f: A → 𝒞`, both computed up to
/// `arity_max`.
#[derive(Clone, Debug)]
pub struct MinimalModel {
    pub algebra: AInfAlgebra,
    pub morphism: AInfMorphism,
    /// The splitting of the augmentation ideal `𝒞̄`.
    pub splitting: Splitting,
    /// Positions in `𝒞` of the basis of `𝒞̄`.
    pub ideal: Vec<usize>,
    pub arity_max: usize,
}

pub fn minimal_model(c: &AInfAlgebra, arity_max: usize) -> Result<MinimalModel> {
    minimal_model_with(c, arity_max, Exec::default())
}

pub fn minimal_model_with(c: &AInfAlgebra, arity_max: usize, exec: Exec) -> Result<MinimalModel> {
    if arity_max < 2 {
        return Err(Error::OutOfRange("arity_max must be at least 2".into()));
    }
    if !c.is_dg() {
        return Err(Error::Hypothesis("transfer input must be a DG algebra".into()));
    }
    if !c.is_augmented() {
        return Err(Error::Hypothesis("transfer input must be augmented".into()));
    }
    let field = c.field();
    let ideal = c.augmentation_ideal()?;
    let cbar = c.restrict_to_ideal()?;
    let split = build_splitting(&cbar.m1_complex()?)?;
    let rec = recursion(&cbar, &split, arity_max, exec)?;
    let hspace = &split.harmonic;
    let degs = |k: &[usize]| k.iter().map(|&x| hspace.degree(x)).collect::<Vec<i64>>();
    let mut hbar = AlgebraBuilder::new(field, hspace.clone()).arity_bound(arity_max);
    for (k, v) in rec.b.all_entries() {
        let e = signs::op_suspension_sign(&degs(k));
        hbar.add_op(k.clone(), &v.scaled(&field.sign(e)));
    }
    let algebra = hbar.build()?.unitize();
    let unit = c.unit().expect("augmented implies unital");
    let mut comps = StructureMaps::new();
    comps.set(vec![0], SparseVec::unit(unit, field));
    for (k, v) in rec.f.all_entries() {
        let e = signs::morphism_suspension_sign(&degs(k));
        let key: Vec<usize> = k.iter().map(|x| x + 1).collect();
        let out = v.reindexed(|g| Some(ideal[g])).expect("ideal index");
        comps.set(key, out.scaled(&field.sign(e)));
    }
    let morphism = AInfMorphism::new(algebra.clone(), c.clone(), comps, true)?.truncated(arity_max);
    let model = MinimalModel {
        algebra,
        morphism,
        splitting: split,
        ideal,
        arity_max,
    };
    model.certify(exec)?;
    Ok(model)
}

impl MinimalModel {
    /// Rejects the output unless the model passes the Stasheff identities,
    /// the morphism identities and strict unitality up to `arity_max`.
    fn certify(&self, exec: Exec) -> Result<()> {
        if let AxiomReport::Fail { n, .. } = self.algebra.check_axioms_with(self.arity_max, exec)? {
            return Err(Error::Structural(format!(
                "transferred operations fail the Stasheff identity in arity {n}"
            )));
        }
        if let AxiomReport::Fail { n, .. } = self.morphism.check_with(self.arity_max, exec)?.report {
            return Err(Error::Structural(format!(
                "transferred morphism fails its identity in arity {n}"
            )));
        }
        self.algebra.check_unit()?;
        if !self.morphism.is_quasi_isomorphism()? {
            return Err(Error::Structural("f₁ is not a quasi-isomorphism".into()));
        }
        Ok(())
    }

    /// `p∘f₁` on the harmonic basis, which is the identity matrix.
    pub fn cohomology_matrix(&self) -> LinearMap {
        let field = self.algebra.field();
        let n = self.algebra.dim();
        let pos: HashMap<usize, usize> =
            self.ideal.iter().enumerate().map(|(a, &g)| (g, a)).collect();
        let cols = (0..n)
            .map(|x| {
                if x == 0 {
                    return SparseVec::unit(0, field);
                }
                let img = self.morphism.f(&[x]);
                let local = img.reindexed(|g| pos.get(&g).copied()).unwrap_or_default();
                self.splitting
                    .p
                    .apply(&local)
                    .reindexed(|k| Some(k + 1))
                    .unwrap()
            })
            .collect();
        LinearMap::new(field, n, cols)
    }

    /// Arities `n ≥ 3` in which the model has a nonzero operation.
    pub fn higher_arities(&self) -> Vec<usize> {
        (3..=self.arity_max)
            .filter(|&n| self.algebra.ops().entries(n).any(|(_, v)| !v.is_zero()))
            .collect()
    }

    /// Compares the recursion with the explicit tree sums on every
    /// harmonic tuple of arity `2..=n_max`; returns the first tuple (in
    /// model indices) where they differ.
    pub fn tree_sum_mismatch(&self, c: &AInfAlgebra, n_max: usize) -> Result<Option<Vec<usize>>> {
        let field = c.field();
        let cbar = c.restrict_to_ideal()?;
        let hs = &self.splitting.harmonic;
        let nh = hs.dim();
        for n in 2..=n_max.min(self.arity_max) {
            for k in 0..tuple_count(nh, n)? {
                let t = decode_tuple(k, nh, n);
                let (bv, fv) = tree_sum_b(&cbar, &self.splitting, &t);
                let degs: Vec<i64> = t.iter().map(|&x| hs.degree(x)).collect();
                let key: Vec<usize> = t.iter().map(|x| x + 1).collect();
                let m = bv
                    .scaled(&field.sign(signs::op_suspension_sign(&degs)))
                    .reindexed(|g| Some(g + 1))
                    .unwrap();
                let f = fv
                    .scaled(&field.sign(signs::morphism_suspension_sign(&degs)))
                    .reindexed(|g| Some(self.ideal[g]))
                    .unwrap();
                if m != self.algebra.m(&key) || f != self.morphism.f(&key) {
                    return Ok(Some(key));
                }
            }
        }
        Ok(None)
    }
}

/// `𝒞 ⊕ k·u ⊕ k·v` with `du = v`, `|u| = deg`, and `u`, `v` multiplying
/// to zero with everything except the unit.  The added pair is acyclic,
/// so the inclusion of `𝒞` is a quasi-isomorphism.
pub fn with_acyclic_pair(c: &AInfAlgebra, deg: i64, name: &str) -> Result<AInfAlgebra> {
    let unit = c
        .unit()
        .ok_or_else(|| Error::Hypothesis("an acyclic pair needs a unital algebra".into()))?;
    if !c.is_dg() {
        return Err(Error::Hypothesis("an acyclic pair is added to DG algebras only".into()));
    }
    let u = name.to_string();
    let v = format!("d{name}");
    let basis = (0..c.dim())
        .map(|i| (c.label(i).to_string(), c.degree(i)))
        .chain([(u.clone(), deg), (v.clone(), deg + 1)]);
    let space = GradedSpace::new(basis)?;
    let mut b = AlgebraBuilder::new(c.field(), space);
    for (k, w) in c.ops().all_entries() {
        if !k.contains(&unit) || k.len() != 2 {
            b.add_op(k.clone(), w);
        }
    }
    let mut b = b.op(&[u.as_str()], &[(v.as_str(), 1)])?.unit_with_laws(c.label(unit))?;
    if c.is_augmented() {
        b = b.augmented();
    }
    b.build()
}

#[cfg(test)]
mod tests;
