//! Strictly unital, augmented A∞-algebras.

use crate::ainfty::structure::StructureMaps;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::graded::{Cohomology, Complex, GradedSpace};
use crate::linalg::{LinearMap, SparseVec};
use crate::signs;

/// A finite-dimensional A∞-algebra with operations `m_n` of degree `2−n`.
///
/// When an augmentation is present it is the coordinate dual to the unit,
/// so the augmentation ideal `Ā` is spanned by the non-unit basis
/// elements.  Builders with other augmentations change basis first.
#[derive(Clone, Debug, PartialEq)]
pub struct AInfAlgebra {
    field: Field,
    space: GradedSpace,
    ops: StructureMaps,
    arity_bound: usize,
    unit: Option<usize>,
    augmented: bool,
}

/// Outcome of an identity check over all basis tuples.
#[derive(Clone, Debug, PartialEq)]
pub enum AxiomReport {
    Pass {
        checked_up_to: usize,
    },
    Fail {
        n: usize,
        inputs: Vec<usize>,
        residual: SparseVec,
    },
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomReport::Pass { .. })
    }
}

/// Decodes the `k`-th tuple of `[0, dim)^n` in lexicographic order.
pub(crate) fn decode_tuple(mut k: usize, dim: usize, n: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for slot in t.iter_mut().rev() {
        *slot = k % dim;
        k /= dim;
    }
    t
}

pub(crate) fn tuple_count(dim: usize, n: usize) -> Result<usize> {
    dim.checked_pow(n as u32)
        .filter(|&c| c <= 1 << 28)
        .ok_or(Error::CapExceeded {
            needed: (dim as u128).saturating_pow(n as u32),
            cap: 1 << 28,
        })
}

/// Incremental constructor for [`AInfAlgebra`].
#[derive(Clone, Debug)]
pub struct AlgebraBuilder {
    field: Field,
    space: GradedSpace,
    ops: StructureMaps,
    unit: Option<usize>,
    unit_laws: bool,
    augmentation: Option<SparseVec>,
    arity_bound: usize,
}

impl AlgebraBuilder {
    pub fn new(field: Field, space: GradedSpace) -> Self {
        AlgebraBuilder {
            field,
            space,
            ops: StructureMaps::new(),
            unit: None,
            unit_laws: false,
            augmentation: None,
            arity_bound: 0,
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    /// Adds `m_n(inputs) += Σ c·out` with integer coefficients.
    pub fn op(mut self, inputs: &[&str], out: &[(&str, i64)]) -> Result<Self> {
        let idx = inputs
            .iter()
            .map(|l| self.space.try_index(l))
            .collect::<Result<Vec<_>>>()?;
        let mut v = SparseVec::new();
        for (l, c) in out {
            v.add_term(self.space.try_index(l)?, &self.field.from_i64(*c));
        }
        self.ops.add(idx, &v);
        Ok(self)
    }

    /// Adds `m_n(inputs) += v` on indices.
    pub fn op_vec(mut self, inputs: Vec<usize>, v: &SparseVec) -> Self {
        self.ops.add(inputs, v);
        self
    }

    pub fn add_op(&mut self, inputs: Vec<usize>, v: &SparseVec) {
        self.ops.add(inputs, v);
    }

    /// Declares the unit without adding unit laws.
    pub fn unit(mut self, label: &str) -> Result<Self> {
        self.unit = Some(self.space.try_index(label)?);
        Ok(self)
    }

    /// Declares the unit and installs `m₂(1,a) = m₂(a,1) = a`.
    pub fn unit_with_laws(mut self, label: &str) -> Result<Self> {
        self.unit = Some(self.space.try_index(label)?);
        self.unit_laws = true;
        Ok(self)
    }

    /// Augmentation dual to the unit.
    pub fn augmented(mut self) -> Self {
        self.augmentation = Some(SparseVec::new());
        self
    }

    /// An explicit augmentation functional (coefficients on the basis).
    pub fn augmentation(mut self, functional: SparseVec) -> Self {
        self.augmentation = Some(functional);
        self
    }

    pub fn arity_bound(mut self, n: usize) -> Self {
        self.arity_bound = n;
        self
    }

    pub fn build(mut self) -> Result<AInfAlgebra> {
        let f = self.field;
        if let Some(u) = self.unit {
            if self.space.degree(u) != 0 {
                return Err(Error::Structural("unit must have degree 0".into()));
            }
            if self.unit_laws {
                for a in 0..self.space.dim() {
                    self.ops.set(vec![u, a], SparseVec::unit(a, f));
                    self.ops.set(vec![a, u], SparseVec::unit(a, f));
                }
            }
        }
        for (inputs, v) in self.ops.all_entries() {
            let n = inputs.len();
            if n == 0 {
                return Err(Error::Structural("arity-0 operation".into()));
            }
            let want: i64 = inputs.iter().map(|&i| self.space.degree(i)).sum::<i64>() + 2 - n as i64;
            for (o, c) in v.iter() {
                if c.field() != f {
                    return Err(Error::MixedField(f, c.field()));
                }
                if o >= self.space.dim() {
                    return Err(Error::Structural("output index out of range".into()));
                }
                if self.space.degree(o) != want {
                    return Err(Error::Structural(format!(
                        "m_{n}({}) has a term `{}` of degree {} instead of {want}",
                        inputs
                            .iter()
                            .map(|&i| self.space.label(i))
                            .collect::<Vec<_>>()
                            .join(","),
                        self.space.label(o),
                        self.space.degree(o)
                    )));
                }
            }
        }
        let arity_bound = self.arity_bound.max(self.ops.max_arity());
        let mut alg = AInfAlgebra {
            field: f,
            space: self.space,
            ops: self.ops,
            arity_bound,
            unit: self.unit,
            augmented: false,
        };
        if let Some(aug) = self.augmentation {
            let u = alg
                .unit
                .ok_or_else(|| Error::Structural("augmentation needs a unit".into()))?;
            let standard = aug.is_zero() || aug == SparseVec::unit(u, f);
            if !standard {
                if aug.get(u).map(|c| !c.is_one()).unwrap_or(true) {
                    return Err(Error::Structural("augmentation must send the unit to 1".into()));
                }
                alg = alg.rebase_augmentation(&aug);
            }
            alg.augmented = true;
            alg.check_augmentation()?;
        }
        Ok(alg)
    }
}

impl AInfAlgebra {
    pub fn builder(field: Field, space: GradedSpace) -> AlgebraBuilder {
        AlgebraBuilder::new(field, space)
    }

    /// Assembles from parts, validating degrees.
    pub fn from_parts(
        field: Field,
        space: GradedSpace,
        ops: StructureMaps,
        unit: Option<usize>,
        augmented: bool,
    ) -> Result<Self> {
        let mut b = AlgebraBuilder::new(field, space);
        b.ops = ops;
        b.unit = unit;
        if augmented {
            b.augmentation = Some(SparseVec::new());
        }
        b.build()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.space.degree(i)
    }

    pub fn label(&self, i: usize) -> &str {
        self.space.label(i)
    }

    pub fn ops(&self) -> &StructureMaps {
        &self.ops
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn is_augmented(&self) -> bool {
        self.augmented
    }

    /// Indices spanning `Ā` (all non-unit basis elements).
    pub fn augmentation_ideal(&self) -> Result<Vec<usize>> {
        if !self.augmented {
            return Err(Error::Structural("algebra is not augmented".into()));
        }
        let u = self.unit.expect("augmented implies unital");
        Ok((0..self.dim()).filter(|&i| i != u).collect())
    }

    /// The unit as a vector.
    pub fn unit_vector(&self) -> Option<SparseVec> {
        self.unit.map(|u| SparseVec::unit(u, self.field))
    }

    /// `m_n` on a basis tuple.
    pub fn m(&self, inputs: &[usize]) -> SparseVec {
        self.ops.get(inputs).cloned().unwrap_or_default()
    }

    /// `m_n` on vectors.
    pub fn m_vec(&self, args: &[&SparseVec]) -> SparseVec {
        self.ops.eval(args, self.field)
    }

    /// `m₁` as a matrix.
    pub fn m1_map(&self) -> LinearMap {
        LinearMap::new(
            self.field,
            self.dim(),
            (0..self.dim()).map(|i| self.m(&[i])).collect(),
        )
    }

    pub fn m1_complex(&self) -> Result<Complex> {
        Complex::new(self.field, self.space.clone(), self.m1_map())
    }

    /// Whether `m_n = 0` for `n ≥ 3`.
    pub fn is_dg(&self) -> bool {
        self.ops.max_arity() <= 2
    }

    /// Whether `m₁ = 0`.
    pub fn is_minimal(&self) -> bool {
        self.ops.table(1).map(|t| t.is_empty()).unwrap_or(true)
    }

    /// A copy with replaced operations (degrees re-validated).
    pub fn with_ops(&self, ops: StructureMaps) -> Result<Self> {
        AInfAlgebra::from_parts(self.field, self.space.clone(), ops, self.unit, self.augmented)
    }

    /// Forgets the unit and augmentation markers.
    pub fn forget_unit(&self) -> Self {
        let mut a = self.clone();
        a.unit = None;
        a.augmented = false;
        a
    }

    /// Degree-forced arity bound: when every basis element has degree at
    /// least 2, `m_n` with `n(d_min − 1) > d_max − 2` lands in a zero space.
    pub fn degree_forced_arity_bound(&self) -> Option<usize> {
        let (lo, hi) = self.space.support()?;
        if lo >= 2 {
            Some(((hi - 2) / (lo - 1)).max(0) as usize)
        } else {
            None
        }
    }

    fn rebase_augmentation(&self, aug: &SparseVec) -> AInfAlgebra {
        // New basis e'_i = e_i − aug(e_i)·1 for i ≠ unit.
        let f = self.field;
        let u = self.unit.unwrap();
        let a = |i: usize| aug.get(i).cloned().unwrap_or_else(|| f.zero());
        let new_vec = |i: usize| {
            let mut v = SparseVec::unit(i, f);
            if i != u {
                v.add_term(u, &-&a(i));
            }
            v
        };
        let to_new = |v: &SparseVec| {
            let mut w = v.clone();
            let mut extra = f.zero();
            for (j, c) in v.iter() {
                if j != u {
                    extra = &extra + &(c * &a(j));
                }
            }
            w.add_term(u, &extra);
            w
        };
        let dim = self.dim();
        let mut ops = StructureMaps::new();
        for n in 1..=self.arity_bound {
            let count = dim.pow(n as u32);
            for k in 0..count {
                let t = decode_tuple(k, dim, n);
                let args: Vec<SparseVec> = t.iter().map(|&i| new_vec(i)).collect();
                let refs: Vec<&SparseVec> = args.iter().collect();
                let v = to_new(&self.m_vec(&refs));
                ops.set(t, v);
            }
        }
        AInfAlgebra {
            field: f,
            space: self.space.clone(),
            ops,
            arity_bound: self.arity_bound,
            unit: self.unit,
            augmented: self.augmented,
        }
    }

    /// Strict unit conditions: `m₁(1) = 0`, `m₂(1,a) = m₂(a,1) = a`, and
    /// `m_n` vanishes on any tuple containing `1` for `n ≥ 3`.
    pub fn check_unit(&self) -> Result<()> {
        let Some(u) = self.unit else {
            return Err(Error::Structural("no unit declared".into()));
        };
        if !self.m(&[u]).is_zero() {
            return Err(Error::Structural("m₁(1) ≠ 0".into()));
        }
        for a in 0..self.dim() {
            let e = SparseVec::unit(a, self.field);
            if self.m(&[u, a]) != e || self.m(&[a, u]) != e {
                return Err(Error::Structural(format!(
                    "m₂ unit law fails on `{}`",
                    self.label(a)
                )));
            }
        }
        for n in 3..=self.arity_bound {
            if let Some((k, _)) = self.ops.entries(n).find(|(k, _)| k.contains(&u)) {
                return Err(Error::Structural(format!(
                    "m_{n} does not vanish on a unit argument: {:?}",
                    k.iter().map(|&i| self.label(i)).collect::<Vec<_>>()
                )));
            }
        }
        Ok(())
    }

    /// `Ā` is closed under every `m_n` and `m₁` lands in `Ā`.
    pub fn check_augmentation(&self) -> Result<()> {
        let u = self
            .unit
            .ok_or_else(|| Error::Structural("augmentation needs a unit".into()))?;
        for (k, v) in self.ops.all_entries() {
            if !k.contains(&u) && v.get(u).is_some() {
                return Err(Error::Structural(format!(
                    "augmentation ideal not closed: m_{}({}) has a unit component",
                    k.len(),
                    k.iter().map(|&i| self.label(i)).collect::<Vec<_>>().join(",")
                )));
            }
        }
        Ok(())
    }

    /// The Stasheff residual `Σ_{r+s+t=n} (−1)^{r+st} m_{r+1+t}(1^r⊗m_s⊗1^t)`
    /// on a basis tuple, with the Koszul sign `(−1)^{s·Σ_{i≤r}|a_i|}`.
    pub fn stasheff_residual(&self, t: &[usize]) -> SparseVec {
        let n = t.len();
        let degs: Vec<i64> = t.iter().map(|&i| self.degree(i)).collect();
        let mut out = SparseVec::new();
        let mut outer = Vec::with_capacity(n);
        for s in 1..=n.min(self.arity_bound) {
            for r in 0..=(n - s) {
                let tt = n - r - s;
                if r + 1 + tt > self.arity_bound {
                    continue;
                }
                let Some(inner) = self.ops.get(&t[r..r + s]) else {
                    continue;
                };
                let e = signs::stasheff_sign(r, s, tt)
                    + signs::block_sign(2 - s as i64, &degs, r);
                let sg = self.field.sign(e);
                for (j, c) in inner.iter() {
                    outer.clear();
                    outer.extend_from_slice(&t[..r]);
                    outer.push(j);
                    outer.extend_from_slice(&t[r + s..]);
                    if let Some(v) = self.ops.get(&outer) {
                        out.add_scaled(v, &(c * &sg));
                    }
                }
            }
        }
        out
    }

    /// Checks the Stasheff identities on every basis tuple of arity
    /// `1..=n_max`, reporting the first failure in tuple order.
    pub fn check_axioms(&self, n_max: usize) -> Result<AxiomReport> {
        self.check_axioms_with(n_max, Exec::default())
    }

    pub fn check_axioms_with(&self, n_max: usize, exec: Exec) -> Result<AxiomReport> {
        if n_max == 0 {
            return Err(Error::OutOfRange("n_max must be at least 1".into()));
        }
        let dim = self.dim();
        if dim == 0 {
            return Ok(AxiomReport::Pass { checked_up_to: n_max });
        }
        let slice = self.space.slice_dims();
        for n in 1..=n_max {
            let count = tuple_count(dim, n)?;
            let hit = exec.find_first_index(count, |k| {
                let t = decode_tuple(k, dim, n);
                let deg: i64 = t.iter().map(|&i| self.degree(i)).sum::<i64>() + 3 - n as i64;
                if !slice.contains_key(&deg) {
                    return None;
                }
                let r = self.stasheff_residual(&t);
                (!r.is_zero()).then_some((t, r))
            });
            if let Some((inputs, residual)) = hit {
                return Ok(AxiomReport::Fail {
                    n,
                    inputs,
                    residual,
                });
            }
        }
        Ok(AxiomReport::Pass { checked_up_to: n_max })
    }

    /// `b_n` on `A[1]^{⊗n}`, stored on the same basis tuples.
    pub fn b_from_m(&self) -> StructureMaps {
        let f = self.field;
        self.ops.map_values(|k, v| {
            let degs: Vec<i64> = k.iter().map(|&i| self.degree(i)).collect();
            v.scaled(&f.sign(signs::op_suspension_sign(&degs)))
        })
    }

    /// Inverse of [`Self::b_from_m`] for `b`-maps on this algebra's space.
    pub fn m_from_b(&self, b: &StructureMaps) -> StructureMaps {
        let f = self.field;
        b.map_values(|k, v| {
            let degs: Vec<i64> = k.iter().map(|&i| self.degree(i)).collect();
            v.scaled(&f.sign(signs::op_suspension_sign(&degs)))
        })
    }

    /// `Σ_{r+s+t=n} b_{r+1+t}(1^r⊗b_s⊗1^t)` on a tuple of suspended basis
    /// elements, an independent evaluation path for the same identities.
    pub fn bar_residual(&self, b: &StructureMaps, t: &[usize]) -> SparseVec {
        let n = t.len();
        let shifted: Vec<i64> = t.iter().map(|&i| self.degree(i) - 1).collect();
        let mut out = SparseVec::new();
        for s in 1..=n {
            for r in 0..=(n - s) {
                let Some(inner) = b.get(&t[r..r + s]) else {
                    continue;
                };
                let sg = self.field.sign(signs::block_sign(1, &shifted, r));
                for (j, c) in inner.iter() {
                    let mut outer = t[..r].to_vec();
                    outer.push(j);
                    outer.extend_from_slice(&t[r + s..]);
                    if let Some(v) = b.get(&outer) {
                        out.add_scaled(v, &(c * &sg));
                    }
                }
            }
        }
        out
    }

    /// `k·1₊ ⊕ A` with the unit laws; `A` becomes the augmentation ideal.
    pub fn unitize(&self) -> AInfAlgebra {
        let base = self.forget_unit();
        let mut label = "1".to_string();
        while base.space.index_of(&label).is_some() {
            label.push('+');
        }
        let space = GradedSpace::new(
            std::iter::once((label.clone(), 0)).chain(
                (0..base.dim()).map(|i| (base.label(i).to_string(), base.degree(i))),
            ),
        )
        .expect("fresh unit label");
        let mut b = AlgebraBuilder::new(self.field, space);
        for (k, v) in base.ops.all_entries() {
            let k2 = k.iter().map(|i| i + 1).collect();
            let v2 = v.reindexed(|i| Some(i + 1)).unwrap();
            b.add_op(k2, &v2);
        }
        b.unit = Some(0);
        b.unit_laws = true;
        b.augmentation = Some(SparseVec::new());
        b.arity_bound = base.arity_bound.max(2);
        b.build().expect("unitization is well formed")
    }

    /// Restriction to `Ā`, the inverse of [`Self::unitize`] on operations.
    pub fn restrict_to_ideal(&self) -> Result<AInfAlgebra> {
        let idx = self.augmentation_ideal()?;
        let pos = |g: usize| idx.iter().position(|&x| x == g);
        let space = GradedSpace::new(
            idx.iter()
                .map(|&i| (self.label(i).to_string(), self.degree(i))),
        )?;
        let mut ops = StructureMaps::new();
        for (k, v) in self.ops.all_entries() {
            if let Some(k2) = k.iter().map(|&i| pos(i)).collect::<Option<Vec<_>>>() {
                let v2 = v
                    .reindexed(pos)
                    .ok_or_else(|| Error::Structural("Ā not closed".into()))?;
                ops.set(k2, v2);
            }
        }
        let mut a = AInfAlgebra::from_parts(self.field, space, ops, None, false)?;
        a.arity_bound = self.arity_bound;
        Ok(a)
    }

    /// Cohomology `H(A, m₁)` with the induced product.
    pub fn cohomology_algebra(&self) -> Result<CohomologyAlgebra> {
        CohomologyAlgebra::compute(self)
    }

    /// Renders a vector with this algebra's labels.
    pub fn render(&self, v: &SparseVec) -> String {
        self.space.render(v)
    }

    pub fn zero_vector_check(&self, v: &SparseVec) -> bool {
        v.indices().all(|i| i < self.dim())
    }
}

/// `H(A)` as a graded associative algebra on chosen representatives.
#[derive(Clone, Debug)]
pub struct CohomologyAlgebra {
    /// The cohomology with `m₂` only.
    pub algebra: AInfAlgebra,
    /// Representative cocycle in `A` of every basis class.
    pub representatives: Vec<SparseVec>,
    pub per_degree: Vec<Cohomology>,
}

impl CohomologyAlgebra {
    fn compute(a: &AInfAlgebra) -> Result<Self> {
        let f = a.field();
        let c = a.m1_complex()?;
        let mut basis = Vec::new();
        let mut reps: Vec<SparseVec> = Vec::new();
        let mut per_degree = Vec::new();
        let mut index_of_class = Vec::new();
        if let Some((lo, hi)) = a.space().support() {
            for d in lo..=hi {
                let preferred: Vec<SparseVec> = a.unit_vector().into_iter().collect();
                let h = c.cohomology_preferring(d, &preferred);
                for r in &h.reps {
                    let lead = r.leading().unwrap().0;
                    let mut l = format!("[{}]", a.label(lead));
                    while basis.iter().any(|(x, _): &(String, i64)| *x == l) {
                        l.push('\'');
                    }
                    basis.push((l, d));
                    reps.push(r.clone());
                }
                index_of_class.push((d, basis.len() - h.dim()));
                per_degree.push(h);
            }
        }
        let space = GradedSpace::new(basis)?;
        let offset = |d: i64| index_of_class.iter().find(|(e, _)| *e == d).map(|(_, o)| *o);
        let class = |v: &SparseVec| -> Result<SparseVec> {
            if v.is_zero() {
                return Ok(SparseVec::new());
            }
            let d = a
                .space()
                .vector_degree(v)
                .ok_or_else(|| Error::Structural("inhomogeneous product".into()))?;
            let h = per_degree
                .iter()
                .find(|h: &&Cohomology| h.degree == d)
                .ok_or_else(|| Error::Structural("product outside support".into()))?;
            let coords = h.class_of(v).ok_or_else(|| {
                Error::Structural("product of cocycles is not a cocycle".into())
            })?;
            let o = offset(d).unwrap();
            Ok(coords.reindexed(|k| Some(k + o)).unwrap())
        };
        let mut ops = StructureMaps::new();
        for (i, ri) in reps.iter().enumerate() {
            for (j, rj) in reps.iter().enumerate() {
                let p = a.m_vec(&[ri, rj]);
                ops.set(vec![i, j], class(&p)?);
            }
        }
        // Coboundaries act trivially.
        let dmap = a.m1_map();
        let bounds: Vec<SparseVec> = dmap.image().rows();
        for b in &bounds {
            for r in &reps {
                for p in [a.m_vec(&[b, r]), a.m_vec(&[r, b])] {
                    if !class(&p)?.is_zero() {
                        return Err(Error::Structural(
                            "coboundaries do not act trivially on cohomology".into(),
                        ));
                    }
                }
            }
        }
        let unit = a.unit_vector().and_then(|u| {
            let v = class(&u).ok()?;
            (v.len() == 1 && v.iter().next().unwrap().1.is_one())
                .then(|| v.leading().unwrap().0)
        });
        let algebra = AInfAlgebra::from_parts(f, space, ops, unit, false)?;
        Ok(CohomologyAlgebra {
            algebra,
            representatives: reps,
            per_degree,
        })
    }
}

/// Tests the entry degrees of a table of maps of the given degree shift.
pub(crate) fn check_degrees(
    space_in: &GradedSpace,
    space_out: &GradedSpace,
    maps: &StructureMaps,
    shift: impl Fn(usize) -> i64,
) -> Result<()> {
    for (k, v) in maps.all_entries() {
        let want = k.iter().map(|&i| space_in.degree(i)).sum::<i64>() + shift(k.len());
        if !space_out.is_homogeneous_of(v, want) {
            return Err(Error::Structural(format!(
                "component of arity {} has wrong degree on {:?}",
                k.len(),
                k.iter().map(|&i| space_in.label(i)).collect::<Vec<_>>()
            )));
        }
    }
    Ok(())
}
