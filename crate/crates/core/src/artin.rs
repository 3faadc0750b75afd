//! Finite-dimensional local artinian DG algebras, their dual coalgebras and
//! `m`-adic quotient towers.

use std::collections::BTreeMap;

use crate::ainfty::{AInfAlgebra, AlgebraBuilder, StructureMaps};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::graded::GradedSpace;
use crate::linalg::{Echelon, LinearMap, SparseVec};

/// An augmented DG algebra `R = k·1 ⊕ m` with `m` nilpotent.
///
/// The basis is adapted to the `m`-adic filtration: every non-unit basis
/// element has a layer `k ≥ 1` and `mⁿ` is spanned by the basis elements of
/// layer `≥ n`.  Inputs whose basis is not adapted are rebased on
/// validation.
#[derive(Clone, Debug)]
pub struct ArtinianDGAlgebra {
    alg: AInfAlgebra,
    layers: Vec<usize>,
    nu: usize,
    negative: bool,
    classical: bool,
    commutative: bool,
}

/// `R/mⁿ` together with the projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub ring: ArtinianDGAlgebra,
    /// Image index in the quotient of every basis element of `R`, or `None`
    /// when it lies in the kernel.
    pub projection: Vec<Option<usize>>,
    /// Basis indices of `R` spanning the kernel `mⁿ`.
    pub kernel: Vec<usize>,
}

impl Quotient {
    pub fn project(&self, v: &SparseVec) -> SparseVec {
        v.iter()
            .filter_map(|(i, c)| self.projection[i].map(|j| (j, c.clone())))
            .fold(SparseVec::new(), |mut acc, (j, c)| {
                acc.add_term(j, &c);
                acc
            })
    }

    /// The canonical section: a quotient basis element lifts to the basis
    /// element it came from.
    pub fn section_index(&self, j: usize) -> usize {
        self.projection.iter().position(|&p| p == Some(j)).unwrap()
    }

    pub fn lift(&self, v: &SparseVec) -> SparseVec {
        v.reindexed(|j| Some(self.section_index(j))).unwrap()
    }
}

fn combination_label(space: &GradedSpace, v: &SparseVec) -> String {
    let mut out = String::new();
    for (k, (i, c)) in v.iter().enumerate() {
        let (neg, mag) = match c.to_decimal().strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, c.to_decimal()),
        };
        if k > 0 || neg {
            out.push(if neg { '-' } else { '+' });
        }
        if mag != "1" {
            out.push_str(&mag);
            out.push('*');
        }
        out.push_str(space.label(i));
    }
    if v.len() > 1 {
        format!("({out})")
    } else {
        out
    }
}

impl ArtinianDGAlgebra {
    /// Validates the standing assumptions and computes `ν` and the class
    /// flags, rebasing to an `m`-adic adapted basis when needed.
    pub fn new(alg: AInfAlgebra) -> Result<Self> {
        if !alg.is_dg() {
            return Err(Error::Structural(
                "artinian base must be a DG algebra (no m_n for n ≥ 3)".into(),
            ));
        }
        let u = alg
            .unit()
            .ok_or_else(|| Error::Structural("artinian base needs a unit".into()))?;
        if alg.degree(u) != 0 {
            return Err(Error::Structural("unit must have degree 0".into()));
        }
        if !alg.is_augmented() {
            return Err(Error::Structural("artinian base needs an augmentation".into()));
        }
        alg.check_unit()?;
        alg.check_augmentation()?;
        if let crate::ainfty::AxiomReport::Fail { n, inputs, .. } = alg.check_axioms(3)? {
            let what = match n {
                1 => "d² ≠ 0",
                2 => "Leibniz rule fails",
                _ => "associativity fails",
            };
            return Err(Error::Structural(format!(
                "{what} on ({})",
                inputs
                    .iter()
                    .map(|&i| alg.label(i))
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
        let (layer_vectors, nu) = adapted_layers(&alg)?;
        let f = alg.field();
        let all_unit_vectors = layer_vectors.iter().all(|(v, _)| {
            v.len() == 1 && v.iter().next().map(|(_, c)| c.is_one()).unwrap_or(false)
        });
        let (alg, layers) = if all_unit_vectors {
            let mut layers = vec![0; alg.dim()];
            for (v, l) in &layer_vectors {
                layers[v.leading().unwrap().0] = *l;
            }
            (alg, layers)
        } else {
            let mut cols = vec![SparseVec::unit(u, f)];
            let mut layers = vec![0];
            for (v, l) in &layer_vectors {
                cols.push(v.clone());
                layers.push(*l);
            }
            (rebase(&alg, &cols)?, layers)
        };
        let degs = alg.space().degrees();
        let negative = degs.iter().all(|&d| d <= 0);
        let classical = degs.iter().all(|&d| d == 0) && alg.is_minimal();
        let commutative = (0..alg.dim()).all(|i| {
            (0..alg.dim()).all(|j| {
                let s = f.sign(alg.degree(i) * alg.degree(j));
                alg.m(&[i, j]) == alg.m(&[j, i]).scaled(&s)
            })
        });
        Ok(ArtinianDGAlgebra {
            alg,
            layers,
            nu,
            negative,
            classical,
            commutative,
        })
    }

    /// Accepts a DG algebra whose basis is already adapted to the `m`-adic
    /// filtration with the given layers, skipping the validation in
    /// [`ArtinianDGAlgebra::new`].  The caller guarantees that the layers
    /// are multiplicative and that `m^nu = 0`.
    pub(crate) fn trusted(alg: AInfAlgebra, layers: Vec<usize>, nu: usize) -> Result<Self> {
        let u = alg
            .unit()
            .ok_or_else(|| Error::Structural("artinian base needs a unit".into()))?;
        if layers.len() != alg.dim() || layers[u] != 0 {
            return Err(Error::Structural("layers do not match the basis".into()));
        }
        let f = alg.field();
        let degs = alg.space().degrees();
        let negative = degs.iter().all(|&d| d <= 0);
        let classical = degs.iter().all(|&d| d == 0) && alg.is_minimal();
        let commutative = alg.ops().entries(2).all(|(k, v)| {
            let s = f.sign(alg.degree(k[0]) * alg.degree(k[1]));
            alg.m(&[k[1], k[0]]) == v.scaled(&s)
        });
        Ok(ArtinianDGAlgebra {
            alg,
            layers,
            nu,
            negative,
            classical,
            commutative,
        })
    }

    pub fn alg(&self) -> &AInfAlgebra {
        &self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn unit(&self) -> usize {
        self.alg.unit().unwrap()
    }

    pub fn label(&self, i: usize) -> &str {
        self.alg.label(i)
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.alg.degree(i)
    }

    /// Nilpotency index: the least `ν` with `m^ν = 0`.
    pub fn nilpotency_index(&self) -> usize {
        self.nu
    }

    /// `m`-adic layer of a basis element (0 for the unit).
    pub fn layer(&self, i: usize) -> usize {
        self.layers[i]
    }

    /// Basis indices of `m`.
    pub fn maximal_ideal(&self) -> Vec<usize> {
        self.ideal_power(1)
    }

    /// Basis indices of `mⁿ`.
    pub fn ideal_power(&self, n: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.layers[i] >= n.max(1)).collect()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// Concentrated in degree 0 with zero differential.
    pub fn is_classical(&self) -> bool {
        self.classical
    }

    /// Graded commutative.
    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        self.alg.m_vec(&[a, b])
    }

    pub fn d(&self, a: &SparseVec) -> SparseVec {
        self.alg.m_vec(&[a])
    }

    /// `R/mⁿ` for `1 ≤ n ≤ ν`.
    pub fn quotient_by_power(&self, n: usize) -> Result<Quotient> {
        if n == 0 || n > self.nu {
            return Err(Error::OutOfRange(format!(
                "quotient order {n} outside 1..={}",
                self.nu
            )));
        }
        let keep: Vec<usize> = (0..self.dim()).filter(|&i| self.layers[i] < n).collect();
        let mut projection = vec![None; self.dim()];
        for (k, &i) in keep.iter().enumerate() {
            projection[i] = Some(k);
        }
        let kernel: Vec<usize> = (0..self.dim()).filter(|&i| self.layers[i] >= n).collect();
        let space = GradedSpace::new(
            keep.iter()
                .map(|&i| (self.label(i).to_string(), self.degree(i))),
        )?;
        let mut ops = StructureMaps::new();
        for (k, v) in self.alg.ops().all_entries() {
            let Some(k2) = k.iter().map(|&i| projection[i]).collect::<Option<Vec<_>>>() else {
                continue;
            };
            let v2 = v
                .iter()
                .filter_map(|(i, c)| projection[i].map(|j| (j, c.clone())))
                .collect::<Vec<_>>();
            ops.set(k2, SparseVec::from_pairs(v2));
        }
        let unit = projection[self.unit()];
        let alg = AInfAlgebra::from_parts(self.field(), space, ops, unit, true)?;
        let layers = keep.iter().map(|&i| self.layers[i]).collect();
        let ring = ArtinianDGAlgebra {
            negative: alg.space().degrees().iter().all(|&d| d <= 0),
            classical: alg.space().degrees().iter().all(|&d| d == 0) && alg.is_minimal(),
            commutative: self.commutative,
            alg,
            layers,
            nu: n.min(self.nu),
        };
        Ok(Quotient {
            ring,
            projection,
            kernel,
        })
    }

    /// The graded dual coalgebra `R*`.
    pub fn dual_coalgebra(&self) -> DualCoalgebra {
        DualCoalgebra::of(self)
    }

    /// Every element of `R` in degree 0 (finite fields only).
    pub fn degree_zero_elements(&self) -> Result<Vec<SparseVec>> {
        let basis: Vec<SparseVec> = self
            .alg
            .space()
            .in_degree(0)
            .into_iter()
            .map(|i| SparseVec::unit(i, self.field()))
            .collect();
        crate::linalg::enumerate_span(self.field(), &basis)
    }

    /// Units of the degree-0 part of a classical `R`: `k^× · (1 + m⁰)`.
    pub fn units(&self) -> Result<Vec<SparseVec>> {
        let u = self.unit();
        Ok(self
            .degree_zero_elements()?
            .into_iter()
            .filter(|v| v.get(u).map(|c| !c.is_zero()).unwrap_or(false))
            .collect())
    }

    /// Inverse of a unit `c(1 + n)` with `n` nilpotent.
    pub fn inverse(&self, v: &SparseVec) -> Option<SparseVec> {
        let u = self.unit();
        let c = v.get(u)?.clone();
        let ci = c.inv()?;
        let f = self.field();
        // v = c(1 + n), v⁻¹ = c⁻¹ Σ (−n)^k
        let mut n = v.scaled(&ci);
        n.add_term(u, &-&f.one());
        let neg = n.neg();
        let mut term = SparseVec::unit(u, f);
        let mut acc = SparseVec::new();
        for _ in 0..=self.nu {
            acc.add(&term);
            term = self.mul(&term, &neg);
        }
        Some(acc.scaled(&ci))
    }
}

/// The `m`-adic adapted non-unit basis vectors with their layers, top
/// layer last, plus the nilpotency index.
fn adapted_layers(alg: &AInfAlgebra) -> Result<(Vec<(SparseVec, usize)>, usize)> {
    let f = alg.field();
    let u = alg.unit().unwrap();
    let dim = alg.dim();
    let ideal: Vec<SparseVec> = (0..dim)
        .filter(|&i| i != u)
        .map(|i| SparseVec::unit(i, f))
        .collect();
    // powers[k] = independent homogeneous spanning set of m^{k+1}
    let mut powers: Vec<Vec<SparseVec>> = vec![ideal.clone()];
    loop {
        let last = powers.last().unwrap();
        if last.is_empty() {
            break;
        }
        if powers.len() > dim + 1 {
            return Err(Error::Structural(
                "maximal ideal is not nilpotent (base is not local artinian)".into(),
            ));
        }
        let mut by_degree: BTreeMap<i64, Echelon> = BTreeMap::new();
        let mut next = Vec::new();
        for x in last {
            for y in &ideal {
                for p in [alg.m_vec(&[x, y]), alg.m_vec(&[y, x])] {
                    if p.is_zero() {
                        continue;
                    }
                    let d = alg.space().vector_degree(&p).expect("homogeneous product");
                    let e = by_degree.entry(d).or_insert_with(|| Echelon::new(f, dim));
                    if e.insert(&p) {
                        next.push(p);
                    }
                }
            }
        }
        if next.len() == last.len() && !next.is_empty() {
            // m^{k+1} = m^k (dimension stable and m^{k+1} ⊂ m^k) ⇒ not nilpotent
            return Err(Error::Structural(format!(
                "maximal ideal is not nilpotent: m^{} = m^{}",
                powers.len() + 1,
                powers.len()
            )));
        }
        powers.push(next);
    }
    let nu = powers.len();
    // Choose complements from the top layer down, preferring basis
    // vectors that already lie in the relevant power.
    let mut chosen: Vec<(SparseVec, usize)> = Vec::new();
    let mut by_degree: BTreeMap<i64, Echelon> = BTreeMap::new();
    for k in (0..powers.len() - 1).rev() {
        let span = Echelon::from_vectors(f, dim, powers[k].iter());
        let mut candidates: Vec<SparseVec> =
            ideal.iter().filter(|v| span.contains(v)).cloned().collect();
        candidates.extend(powers[k].iter().cloned());
        for v in &candidates {
            let d = alg.space().vector_degree(v).unwrap();
            let e = by_degree.entry(d).or_insert_with(|| Echelon::new(f, dim));
            if e.insert(v) {
                chosen.push((v.clone(), k + 1));
            }
        }
    }
    chosen.sort_by(|a, b| {
        a.1.cmp(&b.1)
            .then(a.0.leading().unwrap().0.cmp(&b.0.leading().unwrap().0))
    });
    Ok((chosen, nu))
}

/// Rewrites `alg` in the basis given by the columns (old coordinates); the
/// first column must be the unit.
fn rebase(alg: &AInfAlgebra, cols: &[SparseVec]) -> Result<AInfAlgebra> {
    let f = alg.field();
    let n = alg.dim();
    let solver = LinearMap::new(f, n, cols.to_vec()).solver();
    let coords = |v: &SparseVec| solver.solve(v).expect("basis change is invertible");
    let mut labels = Vec::new();
    for c in cols {
        let mut l = combination_label(alg.space(), c);
        while labels.iter().any(|(x, _): &(String, i64)| *x == l) {
            l.push('\'');
        }
        labels.push((l, alg.space().vector_degree(c).unwrap_or(0)));
    }
    let space = GradedSpace::new(labels)?;
    let mut b = AlgebraBuilder::new(f, space);
    for i in 0..n {
        let v = coords(&alg.m_vec(&[&cols[i]]));
        b.add_op(vec![i], &v);
        for j in 0..n {
            let v = coords(&alg.m_vec(&[&cols[i], &cols[j]]));
            b.add_op(vec![i, j], &v);
        }
    }
    let unit = b.space().label(0).to_string();
    b.unit(&unit)?.augmented().build()
}

/// The graded dual `R*` with `Δ(φ)(a⊗b) = φ(ab)` under the Koszul rule
/// `(φ⊗ψ)(a⊗b) = (−1)^{|ψ||a|} φ(a)ψ(b)`.
#[derive(Clone, Debug)]
pub struct DualCoalgebra {
    pub field: Field,
    /// Dual basis: `e_i*` has degree `−|e_i|`.
    pub space: GradedSpace,
    /// `Δ(e_k*) = Σ c · e_i*⊗e_j*`.
    pub coproduct: Vec<Vec<(usize, usize, Scalar)>>,
    /// `d(φ) = −(−1)^{|φ|} φ∘d`.
    pub differential: LinearMap,
    /// Index of the counit / coaugmentation `1*`.
    pub counit: usize,
}

impl DualCoalgebra {
    fn of(r: &ArtinianDGAlgebra) -> Self {
        let f = r.field();
        let n = r.dim();
        let space = GradedSpace::new(
            (0..n).map(|i| (format!("{}*", r.label(i)), -r.degree(i))),
        )
        .unwrap();
        let mut coproduct = vec![Vec::new(); n];
        for (k, v) in r.alg().ops().entries(2) {
            let (a, b) = (k[0], k[1]);
            let s = f.sign(r.degree(a) * r.degree(b));
            for (o, c) in v.iter() {
                coproduct[o].push((a, b, c * &s));
            }
        }
        for list in &mut coproduct {
            list.sort_by_key(|(a, b, _)| (*a, *b));
        }
        let mut cols = vec![SparseVec::new(); n];
        for (k, v) in r.alg().ops().entries(1) {
            // (dφ)(e_j) = −(−1)^{|φ|} φ(d e_j), so e_o* picks up e_j* terms.
            let j = k[0];
            for (o, c) in v.iter() {
                let s = -f.sign(-r.degree(o));
                cols[o].add_term(j, &(c * &s));
            }
        }
        DualCoalgebra {
            field: f,
            space,
            coproduct,
            differential: LinearMap::new(f, n, cols),
            counit: r.unit(),
        }
    }

    /// Structure constants of the product recovered by transposing back.
    pub fn transpose_back(&self) -> StructureMaps {
        let f = self.field;
        let mut ops = StructureMaps::new();
        for (k, list) in self.coproduct.iter().enumerate() {
            for (a, b, c) in list {
                let s = f.sign(self.space.degree(*a) * self.space.degree(*b));
                ops.add_term(vec![*a, *b], k, &(c * &s));
            }
        }
        ops
    }

    /// `(Δ⊗1)Δ = (1⊗Δ)Δ` on every basis element.
    pub fn is_coassociative(&self) -> bool {
        let f = self.field;
        for k in 0..self.coproduct.len() {
            let mut left: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
            let mut right: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
            for (a, b, c) in &self.coproduct[k] {
                for (x, y, c2) in &self.coproduct[*a] {
                    let e = left.entry((*x, *y, *b)).or_insert_with(|| f.zero());
                    *e = &*e + &(c * c2);
                }
                for (x, y, c2) in &self.coproduct[*b] {
                    let e = right.entry((*a, *x, *y)).or_insert_with(|| f.zero());
                    *e = &*e + &(c * c2);
                }
            }
            left.retain(|_, v| !v.is_zero());
            right.retain(|_, v| !v.is_zero());
            if left != right {
                return false;
            }
        }
        true
    }
}

/// `k[t]/tⁿ` with `|t| = deg ≤ 0` and zero differential, on the basis
/// `1, t, t^2, …` (the variable name is configurable).
pub fn trunc_poly_named(field: Field, var: &str, n: usize, deg: i64) -> Result<ArtinianDGAlgebra> {
    if n == 0 {
        return Err(Error::OutOfRange("k[t]/tⁿ needs n ≥ 1".into()));
    }
    if deg > 0 {
        return Err(Error::OutOfRange("generator degree must be ≤ 0".into()));
    }
    let labels: Vec<(String, i64)> = (0..n)
        .map(|i| match i {
            0 => ("1".to_string(), 0),
            1 => (var.to_string(), deg),
            _ => (format!("{var}^{i}"), deg * i as i64),
        })
        .collect();
    let mut b = AlgebraBuilder::new(field, GradedSpace::new(labels)?);
    for i in 1..n {
        for j in 1..n {
            if i + j < n {
                b.add_op(vec![i, j], &SparseVec::unit(i + j, field));
            }
        }
    }
    ArtinianDGAlgebra::new(b.unit_with_laws("1")?.augmented().build()?)
}

pub fn trunc_poly(field: Field, n: usize, deg: i64) -> Result<ArtinianDGAlgebra> {
    trunc_poly_named(field, "t", n, deg)
}

/// `k[e]/e²` with `|e| = −1`.
pub fn dual_numbers_odd(field: Field) -> Result<ArtinianDGAlgebra> {
    trunc_poly_named(field, "e", 2, -1)
}

/// The square-zero extension `k ⊕ M` of a finite complex `M` (degrees
/// `≤ 0` not required; `M·M = 0`).
pub fn square_zero(
    field: Field,
    module: &[(&str, i64)],
    differential: &[(&str, &str, i64)],
) -> Result<ArtinianDGAlgebra> {
    let mut basis = vec![("1", 0)];
    basis.extend_from_slice(module);
    let mut b = AlgebraBuilder::new(field, GradedSpace::from_strs(&basis)?);
    for (src, dst, c) in differential {
        b = b.op(&[src], &[(dst, *c)])?;
    }
    ArtinianDGAlgebra::new(b.unit_with_laws("1")?.augmented().build()?)
}

/// The fibre product `R₁ ×_k R₂ = k ⊕ m₁ ⊕ m₂` with `m₁m₂ = m₂m₁ = 0`.
/// Labels of the second factor that clash with the first get a `'`.
pub fn fibre_product(r1: &ArtinianDGAlgebra, r2: &ArtinianDGAlgebra) -> Result<ArtinianDGAlgebra> {
    let f = r1.field();
    if f != r2.field() {
        return Err(Error::MixedField(f, r2.field()));
    }
    let m1 = r1.maximal_ideal();
    let m2 = r2.maximal_ideal();
    let mut labels: Vec<(String, i64)> = vec![("1".into(), 0)];
    let mut map1 = vec![0usize; r1.dim()];
    let mut map2 = vec![0usize; r2.dim()];
    for &i in &m1 {
        map1[i] = labels.len();
        labels.push((r1.label(i).to_string(), r1.degree(i)));
    }
    for &i in &m2 {
        map2[i] = labels.len();
        let mut l = r2.label(i).to_string();
        while labels.iter().any(|(x, _)| *x == l) {
            l.push('\'');
        }
        labels.push((l, r2.degree(i)));
    }
    let mut b = AlgebraBuilder::new(f, GradedSpace::new(labels)?);
    for (r, map) in [(r1, &map1), (r2, &map2)] {
        let u = r.unit();
        for (k, v) in r.alg().ops().all_entries() {
            if k.contains(&u) {
                continue;
            }
            let k2 = k.iter().map(|&i| map[i]).collect();
            let v2 = v.reindexed(|i| Some(map[i])).unwrap();
            b.add_op(k2, &v2);
        }
    }
    ArtinianDGAlgebra::new(b.unit_with_laws("1")?.augmented().build()?)
}

/// `k⟨x,y⟩/(x², y², yx)`: basis `1, x, y, xy`, the smallest local
/// non-commutative classical base (`xy ≠ 0 = yx`).
pub fn nc_xy(field: Field) -> Result<ArtinianDGAlgebra> {
    let b = AlgebraBuilder::new(
        field,
        GradedSpace::from_strs(&[("1", 0), ("x", 0), ("y", 0), ("xy", 0)])?,
    )
    .op(&["x", "y"], &[("xy", 1)])?;
    ArtinianDGAlgebra::new(b.unit_with_laws("1")?.augmented().build()?)
}

/// Looks up a base by identifier: `k`, `trunc(n)` (that is `k[t]/tⁿ`),
/// `trunc(n,d)` (with `|t| = d`), `dual_odd`, `nc_xy`.
pub fn builtin_base(field: Field, id: &str) -> Result<ArtinianDGAlgebra> {
    let id = id.trim();
    if id == "k" {
        return trunc_poly(field, 1, 0);
    }
    if id == "dual_odd" {
        return dual_numbers_odd(field);
    }
    if id == "nc_xy" {
        return nc_xy(field);
    }
    if let Some(rest) = id.strip_prefix("trunc(").and_then(|r| r.strip_suffix(')')) {
        let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
        let n: usize = parts[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad base `{id}`")))?;
        let d: i64 = match parts.get(1) {
            Some(s) => s.parse().map_err(|_| Error::Parse(format!("bad base `{id}`")))?,
            None => 0,
        };
        return trunc_poly(field, n, d);
    }
    Err(Error::Parse(format!("unknown base `{id}`")))
}
