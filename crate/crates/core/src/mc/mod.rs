//! The Maurer–Cartan equation in `A⊗m`, the A∞-category `MC∞ᴿ(A)`, the
//! groupoid `MC_R(A)` with its gauge orbits, `π₀`, obstruction classes,
//! order-by-order lifting, and pushforward along A∞-morphisms.

use std::collections::BTreeMap;

use crate::ainfty::{tensor_index, tensor_split, tensor_with_dg, AInfAlgebra, AInfMorphism, StructureMaps};
use crate::artin::{ArtinianDGAlgebra, Quotient};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::graded::{Cohomology, Complex, GradedSpace};
use crate::linalg::{enumerate_span, solve_affine, sort_vectors, Echelon, LinearMap, SparseVec};
use crate::signs;

/// `Σ_{n=1}^{max_n} (−1)^{n(n+1)/2} m_n(α,…,α)` in the algebra `t`.
pub fn mc_sum(t: &AInfAlgebra, alpha: &SparseVec, max_n: usize) -> SparseVec {
    let f = t.field();
    let mut out = SparseVec::new();
    if alpha.is_zero() {
        return out;
    }
    for n in 1..=max_n.min(t.arity_bound()) {
        let args = vec![alpha; n];
        out.add_scaled(&t.m_vec(&args), &f.sign(signs::mc_sign(n)));
    }
    out
}

/// All `(i_0, …, i_n)` with `Σ i_k ≤ max`.
fn insertion_vectors(slots: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; slots];
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..=left {
            cur[k] = i;
            rec(k + 1, left - i, cur, out);
        }
        cur[k] = 0;
    }
    rec(0, max, &mut cur, &mut out);
    out
}

/// `A⊗R` for a strictly unital `A` and a local artinian DG algebra `R`,
/// with the Maurer–Cartan calculus on `A⊗m`.
#[derive(Clone, Debug)]
pub struct McSetting {
    a: AInfAlgebra,
    r: ArtinianDGAlgebra,
    t: AInfAlgebra,
}

impl McSetting {
    pub fn new(a: &AInfAlgebra, r: &ArtinianDGAlgebra) -> Result<Self> {
        if a.unit().is_none() {
            return Err(Error::Hypothesis("A must be strictly unital".into()));
        }
        a.check_unit()?;
        let t = tensor_with_dg(a, r.alg())?;
        Ok(McSetting {
            a: a.clone(),
            r: r.clone(),
            t,
        })
    }

    pub fn algebra(&self) -> &AInfAlgebra {
        &self.a
    }

    pub fn base(&self) -> &ArtinianDGAlgebra {
        &self.r
    }

    /// `A⊗R` as an A∞-algebra.
    pub fn tensor(&self) -> &AInfAlgebra {
        &self.t
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn dim(&self) -> usize {
        self.t.dim()
    }

    pub fn space(&self) -> &GradedSpace {
        self.t.space()
    }

    pub fn nu(&self) -> usize {
        self.r.nilpotency_index()
    }

    pub fn index(&self, a: usize, r: usize) -> usize {
        tensor_index(a, r, self.r.dim())
    }

    pub fn split(&self, i: usize) -> (usize, usize) {
        tensor_split(i, self.r.dim())
    }

    /// The `m`-adic layer of a basis element `a⊗r`.
    pub fn layer(&self, i: usize) -> usize {
        self.r.layer(self.split(i).1)
    }

    /// `1⊗1`.
    pub fn unit(&self) -> usize {
        self.index(self.a.unit().unwrap(), self.r.unit())
    }

    pub fn unit_vector(&self) -> SparseVec {
        SparseVec::unit(self.unit(), self.field())
    }

    /// Basis of `(A⊗m)^d`.
    pub fn ideal_basis(&self, d: i64) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.layer(i) >= 1 && self.t.degree(i) == d)
            .collect()
    }

    /// Basis of `(A⊗mᵏ)^d`.
    pub fn power_basis(&self, k: usize, d: i64) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.layer(i) >= k && self.t.degree(i) == d)
            .collect()
    }

    pub fn in_ideal_of_degree(&self, v: &SparseVec, d: i64) -> bool {
        v.indices().all(|i| self.layer(i) >= 1 && self.t.degree(i) == d)
    }

    /// Parses `[("x⊗t", 1), …]` into a vector of `A⊗R`.
    pub fn vector(&self, terms: &[(&str, i64)]) -> Result<SparseVec> {
        let f = self.field();
        let mut v = SparseVec::new();
        for (l, c) in terms {
            v.add_term(self.space().try_index(l)?, &f.from_i64(*c));
        }
        Ok(v)
    }

    /// `a⊗r` from vectors of `A` and `R`.
    pub fn tensor_of(&self, a: &SparseVec, r: &SparseVec) -> SparseVec {
        crate::ainfty::tensor_vectors(a, r, self.r.dim())
    }

    pub fn render(&self, v: &SparseVec) -> String {
        self.space().render(v)
    }

    fn check_object(&self, alpha: &SparseVec) -> Result<()> {
        if !self.in_ideal_of_degree(alpha, 1) {
            return Err(Error::Structural(format!(
                "`{}` is not in (A⊗m)¹",
                self.render(alpha)
            )));
        }
        Ok(())
    }

    /// The Maurer–Cartan residual `Σ (−1)^{n(n+1)/2} m_n(α,…,α)`.  Terms
    /// with `n ≥ ν` are evaluated once to certify that they vanish.
    pub fn mc_residual(&self, alpha: &SparseVec) -> Result<SparseVec> {
        self.check_object(alpha)?;
        let nu = self.nu();
        let r = mc_sum(&self.t, alpha, nu.saturating_sub(1));
        if nu <= self.t.arity_bound() && !alpha.is_zero() {
            let args = vec![alpha; nu];
            if !self.t.m_vec(&args).is_zero() {
                return Err(Error::Structural(format!(
                    "m_{nu}(α,…,α) ≠ 0 although m^{nu} = 0"
                )));
            }
        }
        Ok(r)
    }

    pub fn is_mc(&self, alpha: &SparseVec) -> Result<bool> {
        Ok(self.mc_residual(alpha)?.is_zero())
    }

    fn require_finite(&self) -> Result<()> {
        if !self.field().is_finite() {
            return Err(Error::OutOfRange(
                "enumeration needs a finite field".into(),
            ));
        }
        Ok(())
    }

    /// Every Maurer–Cartan element, found layer by layer: modulo `m^{k+1}`
    /// the equation is affine in the layer-`k` part of `α`.
    pub fn enumerate_mc(&self) -> Result<Vec<SparseVec>> {
        self.enumerate_mc_with(Exec::default(), MC_ENUMERATION_CAP)
    }

    pub fn enumerate_mc_with(&self, exec: Exec, cap: usize) -> Result<Vec<SparseVec>> {
        self.require_finite()?;
        let f = self.field();
        let nu = self.nu();
        let mut partial = vec![SparseVec::new()];
        for k in 1..nu {
            let layer: Vec<usize> = (0..self.dim())
                .filter(|&i| self.layer(i) == k && self.t.degree(i) == 1)
                .collect();
            let keep = |i: usize| self.layer(i) == k;
            let cols: Vec<SparseVec> = layer
                .iter()
                .map(|&i| self.t.m(&[i]).filtered(keep))
                .collect();
            let map = LinearMap::new(f, self.dim(), cols);
            let next: Vec<Result<Vec<SparseVec>>> = exec.map(&partial, |alpha| {
                let res = mc_sum(&self.t, alpha, nu - 1).filtered(keep);
                let Some(sol) = solve_affine(&map, &res) else {
                    return Ok(Vec::new());
                };
                let mut out = Vec::new();
                for y in enumerate_span(f, &sol.directions)? {
                    let y = y.sum(&sol.particular);
                    let y = y.reindexed(|j| Some(layer[j])).unwrap();
                    out.push(alpha.sum(&y));
                }
                Ok(out)
            });
            let mut all = Vec::new();
            for v in next {
                all.extend(v?);
                if all.len() > cap {
                    return Err(Error::CapExceeded {
                        needed: all.len() as u128,
                        cap: cap as u128,
                    });
                }
            }
            partial = all;
        }
        sort_vectors(&mut partial);
        Ok(partial)
    }

    /// Every Maurer–Cartan element by testing all `p^{dim (A⊗m)¹}`
    /// candidates.
    pub fn enumerate_mc_brute(&self, cap: u128) -> Result<Vec<SparseVec>> {
        self.require_finite()?;
        let f = self.field();
        let basis = self.ideal_basis(1);
        let p = f.order().unwrap() as u128;
        let total = p.checked_pow(basis.len() as u32).unwrap_or(u128::MAX);
        if total > cap {
            return Err(Error::CapExceeded { needed: total, cap });
        }
        let units: Vec<SparseVec> = basis.iter().map(|&i| SparseVec::unit(i, f)).collect();
        let cands = enumerate_span(f, &units)?;
        let ok: Vec<Result<bool>> = Exec::default().map(&cands, |a| self.is_mc(a));
        let mut out = Vec::new();
        for (a, ok) in cands.into_iter().zip(ok) {
            if ok? {
                out.push(a);
            }
        }
        sort_vectors(&mut out);
        Ok(out)
    }

    /// `m_n^{α_0,…,α_n}(x_n, …, x_1)`: the sum over insertions
    /// `(−1)^ε m(α_n^{i_n}, x_n, α_{n−1}^{i_{n−1}}, …, x_1, α_0^{i_0})`,
    /// where `x_k : α_{k−1} → α_k` and `xs = [x_n, …, x_1]`.
    pub fn op(&self, objects: &[&SparseVec], xs: &[&SparseVec]) -> SparseVec {
        twisted_sum(
            self.t.space(),
            self.t.arity_bound(),
            self.nu(),
            objects,
            xs,
            1,
            &|args| self.t.m_vec(args),
        )
    }

    /// The Stasheff residual of `MC∞` on homogeneous `xs = [x_n, …, x_1]`
    /// between `objects = [α_0, …, α_n]`: reading the arguments left to
    /// right as `a_1, …, a_n`, the sum of
    /// `(−1)^{r+st+s·Σ_{i≤r}|a_i|} m(a_1,…,a_r, m(a_{r+1},…,a_{r+s}), …)`
    /// with the objects cut accordingly.
    pub fn category_residual(&self, objects: &[&SparseVec], xs: &[&SparseVec]) -> Result<SparseVec> {
        let n = xs.len();
        if objects.len() != n + 1 {
            return Err(Error::Structural("need one more object than morphisms".into()));
        }
        let mut degs = Vec::with_capacity(n);
        for x in xs {
            match self.space().vector_degree(x) {
                Some(d) => degs.push(d),
                None if x.is_zero() => return Ok(SparseVec::new()),
                None => return Err(Error::Structural("inputs must be homogeneous".into())),
            }
        }
        let f = self.field();
        let mut out = SparseVec::new();
        let mut prefix = 0i64;
        for r in 0..n {
            for s in 1..=(n - r) {
                let t = n - r - s;
                let lo = n - r - s;
                let hi = n - r;
                let inner = self.op(&objects[lo..=hi], &xs[r..r + s]);
                if inner.is_zero() {
                    continue;
                }
                let mut outer_objects: Vec<&SparseVec> = objects[..=lo].to_vec();
                outer_objects.extend_from_slice(&objects[hi..]);
                let mut outer: Vec<&SparseVec> = xs[..r].to_vec();
                outer.push(&inner);
                outer.extend_from_slice(&xs[r + s..]);
                let e = signs::stasheff_sign(r, s, t) + s as i64 * prefix;
                out.add_scaled(&self.op(&outer_objects, &outer), &f.sign(e));
            }
            prefix += degs[r];
        }
        Ok(out)
    }

    /// `m₁^{α,β}(x)` for `x : α → β`.
    pub fn m1(&self, alpha: &SparseVec, beta: &SparseVec, x: &SparseVec) -> SparseVec {
        self.op(&[alpha, beta], &[x])
    }

    /// `m₁^{α,β}` on the whole of `A⊗R`.
    pub fn m1_map(&self, alpha: &SparseVec, beta: &SparseVec) -> LinearMap {
        let f = self.field();
        let cols = Exec::default().map_range(self.dim(), |i| {
            self.m1(alpha, beta, &SparseVec::unit(i, f))
        });
        LinearMap::new(f, self.dim(), cols)
    }

    /// `m₁^{α,β}` restricted to a list of basis elements.
    fn m1_on(&self, alpha: &SparseVec, beta: &SparseVec, basis: &[usize]) -> LinearMap {
        let f = self.field();
        let cols = basis
            .iter()
            .map(|&i| self.m1(alpha, beta, &SparseVec::unit(i, f)))
            .collect();
        LinearMap::new(f, self.dim(), cols)
    }

    /// The hom complex `(A⊗R, m₁^{α,β})`.
    pub fn hom_complex(&self, alpha: &SparseVec, beta: &SparseVec) -> Result<Complex> {
        Complex::new(self.field(), self.space().clone(), self.m1_map(alpha, beta))
    }

    /// `Hom(α, β)` in `MC_R(A)`: the affine space `G(α,β)` of cocycles in
    /// `1 + (A⊗m)⁰` modulo the gauge image `m₁^{α,β}((A⊗m)^{−1})`.
    pub fn hom(&self, alpha: &SparseVec, beta: &SparseVec) -> Result<HomSet> {
        self.check_object(alpha)?;
        self.check_object(beta)?;
        let f = self.field();
        let one = self.unit_vector();
        let c = self.m1(alpha, beta, &one);
        let b0 = self.ideal_basis(0);
        let map = self.m1_on(alpha, beta, &b0);
        let solver = map.solver();
        let particular = solver.solve(&c.neg()).map(|y| {
            let mut g = y.reindexed(|j| Some(b0[j])).unwrap();
            g.add(&one);
            g
        });
        let kernel: Vec<SparseVec> = solver
            .kernel()
            .into_iter()
            .map(|v| v.reindexed(|j| Some(b0[j])).unwrap())
            .collect();
        let bm1 = self.ideal_basis(-1);
        let gauge_map = self.m1_on(alpha, beta, &bm1);
        let gauge = Echelon::from_vectors(f, self.dim(), gauge_map.cols.iter());
        let mut span = gauge.clone();
        let mut complement = Vec::new();
        for v in &kernel {
            if span.insert(v) {
                complement.push(v.clone());
            }
        }
        let cocycles = Echelon::from_vectors(f, self.dim(), kernel.iter());
        for g in &gauge_map.cols {
            if !cocycles.contains(g) {
                return Err(Error::Structural(
                    "gauge image is not inside the cocycles; are α, β Maurer–Cartan?".into(),
                ));
            }
        }
        Ok(HomSet {
            field: f,
            source: alpha.clone(),
            target: beta.clone(),
            particular,
            complement,
            gauge,
        })
    }

    /// Whether `α ≅ β` in `MC_R(A)`.
    pub fn isomorphic(&self, alpha: &SparseVec, beta: &SparseVec) -> Result<bool> {
        let one = self.unit_vector();
        let c = self.m1(alpha, beta, &one);
        let b0 = self.ideal_basis(0);
        Ok(self.m1_on(alpha, beta, &b0).solver().solve(&c.neg()).is_some())
    }

    /// Whether `g ∈ G(α,β)`.
    pub fn is_morphism(&self, alpha: &SparseVec, beta: &SparseVec, g: &SparseVec) -> bool {
        let mut y = g.clone();
        y.add_term(self.unit(), &-&self.field().one());
        self.in_ideal_of_degree(&y, 0) && self.m1(alpha, beta, g).is_zero()
    }

    /// The composite `m₂^{α,β,γ}(h, g)` of `g : α → β` and `h : β → γ`.
    pub fn compose(
        &self,
        objects: [&SparseVec; 3],
        g: &SparseVec,
        h: &SparseVec,
    ) -> Result<SparseVec> {
        let [a, b, c] = objects;
        if !self.is_morphism(a, b, g) || !self.is_morphism(b, c, h) {
            return Err(Error::Structural("compose needs morphisms in G(α,β), G(β,γ)".into()));
        }
        let out = self.op(&[a, b, c], &[h, g]);
        if !self.is_morphism(a, c, &out) {
            return Err(Error::Structural("composite is not a morphism".into()));
        }
        Ok(out)
    }

    /// An inverse `g′ : β → α` of `g : α → β`, by successive
    /// approximation on `m₂(g′, g) = 1` and then certified to lie in
    /// `G(β, α)`.
    pub fn invert(&self, alpha: &SparseVec, beta: &SparseVec, g: &SparseVec) -> Result<SparseVec> {
        if !self.is_morphism(alpha, beta, g) {
            return Err(Error::Structural("invert needs a morphism in G(α,β)".into()));
        }
        let one = self.unit_vector();
        let mut gp = one.clone();
        for _ in 0..=self.nu() {
            let prod = self.op(&[alpha, beta, alpha], &[&gp, g]);
            let r = one.difference(&prod);
            if r.is_zero() {
                if !self.is_morphism(beta, alpha, &gp) {
                    return Err(Error::Structural("left inverse is not a cocycle".into()));
                }
                return Ok(gp);
            }
            gp.add(&r);
        }
        Err(Error::Structural("successive approximation did not converge".into()))
    }

    /// `π₀ MC_R(A)`.
    pub fn pi0(&self) -> Result<Pi0> {
        let elements = self.enumerate_mc()?;
        self.pi0_of(elements, Exec::default())
    }

    pub fn pi0_of(&self, elements: Vec<SparseVec>, exec: Exec) -> Result<Pi0> {
        let mut reps: Vec<usize> = Vec::new();
        let mut class_of = Vec::with_capacity(elements.len());
        for (i, a) in elements.iter().enumerate() {
            let hit = exec.find_first_index(reps.len(), |k| {
                match self.isomorphic(&elements[reps[k]], a) {
                    Ok(true) => Some(Ok(k)),
                    Ok(false) => None,
                    Err(e) => Some(Err(e)),
                }
            });
            match hit {
                Some(r) => class_of.push(r?),
                None => {
                    class_of.push(reps.len());
                    reps.push(i);
                }
            }
        }
        Ok(Pi0 {
            elements,
            class_of,
            representatives: reps,
        })
    }
}

/// Cap on the number of partial solutions kept during enumeration.
pub const MC_ENUMERATION_CAP: usize = 1 << 22;

/// Shared insertion sum for the twisted operations (`c = 1`) and for the
/// components of a pushed-forward functor (`c = −1`).
fn twisted_sum(
    space: &GradedSpace,
    bound: usize,
    nu: usize,
    objects: &[&SparseVec],
    xs: &[&SparseVec],
    c: i64,
    eval: &dyn Fn(&[&SparseVec]) -> SparseVec,
) -> SparseVec {
    let n = xs.len();
    debug_assert_eq!(objects.len(), n + 1);
    let mut out = SparseVec::new();
    if n > bound {
        return out;
    }
    // x̄_k for k = 1..n; xs[0] is x_n
    let mut xdeg = Vec::with_capacity(n);
    for k in 1..=n {
        match space.vector_degree(xs[n - k]) {
            Some(d) => xdeg.push(d),
            None => {
                if xs[n - k].is_zero() {
                    return out;
                }
                // split inhomogeneous inputs into homogeneous parts
                let mut parts: BTreeMap<i64, SparseVec> = BTreeMap::new();
                for (i, cf) in xs[n - k].iter() {
                    parts.entry(space.degree(i)).or_default().add_term(i, cf);
                }
                for p in parts.values() {
                    let mut ys = xs.to_vec();
                    ys[n - k] = p;
                    out.add(&twisted_sum(space, bound, nu, objects, &ys, c, eval));
                }
                return out;
            }
        }
    }
    let max = (bound - n).min(nu.saturating_sub(1));
    for ins in insertion_vectors(n + 1, max) {
        if ins
            .iter()
            .enumerate()
            .any(|(k, &i)| i > 0 && objects[k].is_zero())
        {
            continue;
        }
        let mut args: Vec<&SparseVec> = Vec::new();
        for k in (0..=n).rev() {
            for _ in 0..ins[k] {
                args.push(objects[k]);
            }
            if k > 0 {
                args.push(xs[n - k]);
            }
        }
        let e = signs::twisted_epsilon(&xdeg, &ins, c);
        let v = eval(&args);
        if let Some(f) = v.field() {
            out.add_scaled(&v, &f.sign(e));
        }
    }
    out
}

/// A hom-set of `MC_R(A)` as the coset space
/// `(g₀ + ker) / gauge`, where `complement` spans `ker` modulo `gauge`.
#[derive(Clone, Debug)]
pub struct HomSet {
    field: Field,
    pub source: SparseVec,
    pub target: SparseVec,
    /// A point of `G(α,β)`, if nonempty.
    pub particular: Option<SparseVec>,
    pub complement: Vec<SparseVec>,
    pub gauge: Echelon,
}

impl HomSet {
    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }

    /// `dim` of the orbit space as an affine space.
    pub fn orbit_dimension(&self) -> Option<usize> {
        self.particular.as_ref().map(|_| self.complement.len())
    }

    /// Number of morphisms `|Hom(α,β)|` over a finite field.
    pub fn cardinality(&self) -> Option<u128> {
        let p = self.field.order()? as u128;
        Some(match self.orbit_dimension() {
            None => 0,
            Some(k) => p.checked_pow(k as u32).unwrap_or(u128::MAX),
        })
    }

    /// The canonical representative of the orbit of `g`.
    pub fn normal_form(&self, g: &SparseVec) -> SparseVec {
        self.gauge.reduce(g)
    }

    pub fn same_orbit(&self, g: &SparseVec, h: &SparseVec) -> bool {
        self.gauge.contains(&g.difference(h))
    }

    /// Normal-form representatives of every orbit (finite fields).
    pub fn orbits(&self) -> Result<Vec<SparseVec>> {
        let Some(g0) = &self.particular else { return Ok(Vec::new()) };
        let mut out: Vec<SparseVec> = enumerate_span(self.field, &self.complement)?
            .into_iter()
            .map(|v| self.normal_form(&v.sum(g0)))
            .collect();
        sort_vectors(&mut out);
        Ok(out)
    }
}

/// Isomorphism classes of Maurer–Cartan elements.
#[derive(Clone, Debug)]
pub struct Pi0 {
    pub elements: Vec<SparseVec>,
    /// Class index of every element.
    pub class_of: Vec<usize>,
    /// Index into `elements` of the first element of every class.
    pub representatives: Vec<usize>,
}

impl Pi0 {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut v = vec![0; self.count()];
        for &c in &self.class_of {
            v[c] += 1;
        }
        v
    }
}

/// One step `R → R̄ = R/mⁿ` of the `m`-adic tower, with `I = mⁿ`
/// square-zero and killed by `m`.
#[derive(Clone, Debug)]
pub struct Tower {
    pub full: McSetting,
    pub quotient: McSetting,
    pub q: Quotient,
    pub n: usize,
    ideal: Vec<usize>,
    ideal_complex: Complex,
}

/// The class `o₂(ᾱ) ∈ H²(A⊗I)`.
#[derive(Clone, Debug)]
pub struct O2 {
    /// `Σ (−1)^{n(n+1)/2+1} m_n(α̃,…,α̃)` for the canonical lift `α̃`.
    pub representative: SparseVec,
    pub class: SparseVec,
    pub vanishes: bool,
    /// A Maurer–Cartan lift when the class vanishes.
    pub lift: Option<SparseVec>,
    /// The recomputation with a second lift differs by a coboundary.
    pub lift_independent: bool,
}

/// The class `o₁ ∈ H¹(A⊗I)` of a morphism between lifted objects.
#[derive(Clone, Debug)]
pub struct O1 {
    pub representative: SparseVec,
    pub class: SparseVec,
    pub vanishes: bool,
    pub lift: Option<SparseVec>,
}

/// The difference class `o₀(f̃, f̃′)`.
#[derive(Clone, Debug)]
pub struct O0 {
    /// `f̃′ − f̃ − m₁^{α,β}(h̃)`, an element of `(A⊗I)⁰`.
    pub difference: SparseVec,
    /// Its class in `H⁰(A⊗I)`.
    pub ideal_class: SparseVec,
    /// Its image modulo `m₁^{α,β}((A⊗m)^{−1})`.
    pub image: SparseVec,
    pub vanishes: bool,
}

/// Result of order-by-order lifting.
#[derive(Clone, Debug, PartialEq)]
pub enum LiftOutcome {
    Lifted(SparseVec),
    Obstructed {
        /// The step `R/m^{level+1} → R/m^{level}` that failed.
        level: usize,
        representative: SparseVec,
        class: SparseVec,
    },
}

impl Tower {
    pub fn new(a: &AInfAlgebra, r: &ArtinianDGAlgebra, n: usize) -> Result<Self> {
        if n == 0 || n > r.nilpotency_index().max(1) {
            return Err(Error::OutOfRange(format!("tower order {n} out of range")));
        }
        if !r.ideal_power(n + 1).is_empty() {
            return Err(Error::Hypothesis(format!(
                "tower layer m^{n} is not square-zero and killed by m (m^{} ≠ 0)",
                n + 1
            )));
        }
        let full = McSetting::new(a, r)?;
        let q = r.quotient_by_power(n)?;
        let quotient = McSetting::new(a, &q.ring)?;
        let ideal: Vec<usize> = (0..full.dim()).filter(|&i| full.layer(i) >= n).collect();
        let pos: BTreeMap<usize, usize> = ideal.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let space = GradedSpace::new(
            ideal
                .iter()
                .map(|&i| (full.space().label(i).to_string(), full.space().degree(i))),
        )?;
        let f = full.field();
        let cols = ideal
            .iter()
            .map(|&i| {
                full.t
                    .m(&[i])
                    .reindexed(|g| pos.get(&g).copied())
                    .ok_or_else(|| Error::Structural("A⊗I is not a subcomplex".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let ideal_complex = Complex::new(f, space, LinearMap::new(f, ideal.len(), cols))?;
        Ok(Tower {
            full,
            quotient,
            q,
            n,
            ideal,
            ideal_complex,
        })
    }

    /// The top step `R → R/m^{ν−1}`.
    pub fn top(a: &AInfAlgebra, r: &ArtinianDGAlgebra) -> Result<Self> {
        Tower::new(a, r, r.nilpotency_index().saturating_sub(1))
    }

    /// `A⊗R → A⊗R̄`.
    pub fn project(&self, v: &SparseVec) -> SparseVec {
        v.reindexed_partial(|i| {
            let (a, r) = self.full.split(i);
            self.q.projection[r].map(|r2| self.quotient.index(a, r2))
        })
    }

    /// The canonical section `A⊗R̄ → A⊗R`.
    pub fn lift(&self, v: &SparseVec) -> SparseVec {
        v.reindexed(|i| {
            let (a, r2) = self.quotient.split(i);
            Some(self.full.index(a, self.q.section_index(r2)))
        })
        .unwrap()
    }

    fn ideal_local(&self, v: &SparseVec) -> Result<SparseVec> {
        let pos: BTreeMap<usize, usize> =
            self.ideal.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        v.reindexed(|g| pos.get(&g).copied())
            .ok_or_else(|| Error::Structural("vector is not in A⊗I".into()))
    }

    fn ideal_global(&self, v: &SparseVec) -> SparseVec {
        v.reindexed(|k| Some(self.ideal[k])).unwrap()
    }

    /// `H^d(A⊗I)`.
    pub fn ideal_cohomology(&self, d: i64) -> Cohomology {
        self.ideal_complex.cohomology(d)
    }

    /// Solves `m₁(y) = v` for `y ∈ (A⊗I)^{d}`.
    fn solve_in_ideal(&self, v: &SparseVec, d: i64) -> Result<Option<SparseVec>> {
        let basis: Vec<usize> = (0..self.ideal.len())
            .filter(|&k| self.ideal_complex.space.degree(k) == d)
            .collect();
        let f = self.full.field();
        let map = LinearMap::new(
            f,
            self.ideal.len(),
            basis.iter().map(|&k| self.ideal_complex.d.cols[k].clone()).collect(),
        );
        let target = self.ideal_local(v)?;
        Ok(map
            .solver()
            .solve(&target)
            .map(|y| self.ideal_global(&y.reindexed(|j| Some(basis[j])).unwrap())))
    }

    fn class_in_ideal(&self, v: &SparseVec, d: i64) -> Result<(SparseVec, bool)> {
        let h = self.ideal_cohomology(d);
        let local = self.ideal_local(v)?;
        let c = h
            .class_of(&local)
            .ok_or_else(|| Error::Structural("obstruction cochain is not a cocycle".into()))?;
        let z = c.is_zero();
        Ok((c, z))
    }

    /// `o₂(ᾱ)` for a Maurer–Cartan element `ᾱ` of `A⊗m̄`.
    pub fn o2(&self, alpha_bar: &SparseVec) -> Result<O2> {
        if !self.quotient.is_mc(alpha_bar)? {
            return Err(Error::NotMaurerCartan(self.quotient.render(alpha_bar)));
        }
        let lift = self.lift(alpha_bar);
        let rep = self.full.mc_residual(&lift)?.neg();
        let (class, vanishes) = self.class_in_ideal(&rep, 2)?;
        // a second lift shifted by the sum of the layer-n degree-1 basis
        let f = self.full.field();
        let mut shift = SparseVec::new();
        for i in self.full.power_basis(self.n, 1) {
            shift.add_term(i, &f.one());
        }
        let rep2 = self.full.mc_residual(&lift.sum(&shift))?.neg();
        let lift_independent = self
            .ideal_cohomology(2)
            .is_coboundary(&self.ideal_local(&rep2.difference(&rep))?);
        let fixed = if vanishes {
            // residual(α̃ + η) = residual(α̃) − m₁(η)
            let eta = self
                .solve_in_ideal(&rep.neg(), 1)?
                .ok_or_else(|| Error::Structural("vanishing class without a primitive".into()))?;
            let l = lift.sum(&eta);
            debug_assert!(self.full.is_mc(&l).unwrap_or(false));
            Some(l)
        } else {
            None
        };
        Ok(O2 {
            representative: rep,
            class,
            vanishes,
            lift: fixed,
            lift_independent,
        })
    }

    /// `o₁` for a morphism `ḡ : ξ₁ → ξ₂` of `MC_{R̄}(A)` and lifts `α_i` of
    /// `ξ_i`.
    pub fn o1(
        &self,
        xi: [&SparseVec; 2],
        g_bar: &SparseVec,
        alphas: [&SparseVec; 2],
    ) -> Result<O1> {
        if !self.quotient.is_morphism(xi[0], xi[1], g_bar) {
            return Err(Error::Structural("ḡ is not a morphism ξ₁ → ξ₂".into()));
        }
        for (x, a) in xi.iter().zip(alphas.iter()) {
            if &self.project(a) != *x || !self.full.is_mc(a)? {
                return Err(Error::Structural("α_i is not a Maurer–Cartan lift of ξ_i".into()));
            }
        }
        let gt = self.lift(g_bar);
        let rep = self.full.m1(alphas[0], alphas[1], &gt);
        let (class, vanishes) = self.class_in_ideal(&rep, 1)?;
        let lift = if vanishes {
            let z = self
                .solve_in_ideal(&rep.neg(), 0)?
                .ok_or_else(|| Error::Structural("vanishing class without a primitive".into()))?;
            Some(gt.sum(&z))
        } else {
            None
        };
        Ok(O1 {
            representative: rep,
            class,
            vanishes,
            lift,
        })
    }

    /// `o₀(f̃, f̃′)` for two lifts in `G(α,β)` of the same orbit.
    pub fn o0(
        &self,
        alpha: &SparseVec,
        beta: &SparseVec,
        f1: &SparseVec,
        f2: &SparseVec,
    ) -> Result<O0> {
        let full = &self.full;
        if !full.is_morphism(alpha, beta, f1) || !full.is_morphism(alpha, beta, f2) {
            return Err(Error::Structural("f̃, f̃′ must lie in G(α,β)".into()));
        }
        let (ab, bb) = (self.project(alpha), self.project(beta));
        let hbar = self.quotient.hom(&ab, &bb)?;
        let d = f2.difference(f1);
        let dbar = self.project(&d);
        // π(f̃′) − π(f̃) = m₁^{ᾱ,β̄}(h̄)
        let bm1 = self.quotient.ideal_basis(-1);
        let map = self.quotient.m1_on(&ab, &bb, &bm1);
        let h = map
            .solver()
            .solve(&dbar)
            .ok_or_else(|| Error::Structural("f̃ and f̃′ do not lift the same orbit".into()))?;
        debug_assert!(hbar.same_orbit(&self.project(f1), &self.project(f2)));
        let ht = self.lift(&h.reindexed(|j| Some(bm1[j])).unwrap());
        let e = d.difference(&full.m1(alpha, beta, &ht));
        let (ideal_class, _) = self.class_in_ideal(&e, 0)?;
        let hom = full.hom(alpha, beta)?;
        let image = hom.normal_form(&e);
        Ok(O0 {
            difference: e,
            ideal_class,
            vanishes: image.is_zero(),
            image,
        })
    }
}

/// Lifts `α₀ ∈ MC(A⊗m/m²)`, given in `A⊗R` on layer-1 basis elements,
/// through the whole `m`-adic tower by solving for corrections greedily.
pub fn lift_mc(a: &AInfAlgebra, r: &ArtinianDGAlgebra, alpha0: &SparseVec) -> Result<LiftOutcome> {
    let nu = r.nilpotency_index();
    let full = McSetting::new(a, r)?;
    if alpha0.indices().any(|i| full.layer(i) != 1) {
        return Err(Error::Structural("α₀ must be supported on A⊗(m/m²)".into()));
    }
    if nu <= 2 {
        return if full.is_mc(alpha0)? {
            Ok(LiftOutcome::Lifted(alpha0.clone()))
        } else {
            Err(Error::NotMaurerCartan(full.render(alpha0)))
        };
    }
    // Work in R_k = R/m^k for k = 2..ν with the same basis labels.
    let mut current = alpha0.clone();
    for level in 2..nu {
        let rk = r.quotient_by_power(level + 1)?;
        let tower = Tower::new(a, &rk.ring, level)?;
        let to_k = |v: &SparseVec| {
            v.reindexed_partial(|i| {
                let (x, y) = full.split(i);
                rk.projection[y].map(|y2| tower.full.index(x, y2))
            })
        };
        let from_k = |v: &SparseVec| {
            v.reindexed(|i| {
                let (x, y2) = tower.full.split(i);
                Some(full.index(x, rk.section_index(y2)))
            })
            .unwrap()
        };
        let bar = tower.project(&to_k(&current));
        let o = tower.o2(&bar)?;
        if !o.vanishes {
            return Ok(LiftOutcome::Obstructed {
                level,
                representative: from_k(&o.representative),
                class: o.class,
            });
        }
        current = from_k(o.lift.as_ref().unwrap());
    }
    if !full.is_mc(&current)? {
        return Err(Error::Structural("lifted element is not Maurer–Cartan".into()));
    }
    Ok(LiftOutcome::Lifted(current))
}

/// `f_R : A₁⊗R → A₂⊗R`, `f_n(a_1⊗r_1, …) = ± f_n(a_1,…,a_n)⊗r_1⋯r_n`.
pub fn tensor_morphism(f: &AInfMorphism, s1: &McSetting) -> Result<StructureMaps> {
    let r = s1.base().alg();
    let dr = r.dim();
    let fld = s1.field();
    let mut out = StructureMaps::new();
    for n in 1..=f.max_arity() {
        let entries: Vec<_> = f.comps().entries(n).collect();
        if entries.is_empty() {
            continue;
        }
        let prods: Vec<(Vec<usize>, SparseVec)> = if n == 1 {
            (0..dr).map(|j| (vec![j], SparseVec::unit(j, fld))).collect()
        } else {
            crate::ainfty::tensor::c_products(r, n)
        };
        for (ka, va) in entries {
            let adeg: Vec<i64> = ka.iter().map(|&i| s1.algebra().degree(i)).collect();
            for (kc, pc) in &prods {
                let cdeg: Vec<i64> = kc.iter().map(|&j| r.degree(j)).collect();
                let e = signs::interchange_sign(&adeg, &cdeg);
                let inputs: Vec<usize> =
                    ka.iter().zip(kc).map(|(&i, &j)| tensor_index(i, j, dr)).collect();
                let v = crate::ainfty::tensor_vectors(va, pc, dr).scaled(&fld.sign(e));
                out.add(inputs, &v);
            }
        }
    }
    Ok(out)
}

/// Pushforward `f_R^*` along a strictly unital A∞-morphism.
#[derive(Clone, Debug)]
pub struct Pushforward {
    pub source: McSetting,
    pub target: McSetting,
    comps: StructureMaps,
    arity: usize,
}

impl Pushforward {
    pub fn new(f: &AInfMorphism, r: &ArtinianDGAlgebra) -> Result<Self> {
        if !f.strict_unital {
            return Err(Error::Hypothesis("pushforward needs a strictly unital morphism".into()));
        }
        let source = McSetting::new(&f.source, r)?;
        let target = McSetting::new(&f.target, r)?;
        let need = r.nilpotency_index().saturating_sub(1).max(1);
        if let Some(k) = f.known_up_to() {
            if k < need {
                return Err(Error::OutOfRange(format!(
                    "morphism known up to arity {k}, pushforward over R needs {need}"
                )));
            }
        }
        let comps = tensor_morphism(f, &source)?;
        Ok(Pushforward {
            source,
            target,
            arity: comps.max_arity(),
            comps,
        })
    }

    fn eval(&self, args: &[&SparseVec]) -> SparseVec {
        self.comps.eval(args, self.source.field())
    }

    /// `f_R^*(α) = Σ (−1)^{n(n−1)/2} f_n(α,…,α)`.
    pub fn object(&self, alpha: &SparseVec) -> Result<SparseVec> {
        self.source.check_object(alpha)?;
        let f = self.source.field();
        let mut out = SparseVec::new();
        if alpha.is_zero() {
            return Ok(out);
        }
        let upto = self.arity.min(self.source.nu().saturating_sub(1));
        for n in 1..=upto {
            let args = vec![alpha; n];
            out.add_scaled(&self.eval(&args), &f.sign(signs::pushforward_sign(n)));
        }
        Ok(out)
    }

    /// The component `F^{α_0,…,α_n}(x_n, …, x_1)` of the pushed-forward
    /// functor on hom spaces.
    pub fn morphism_component(&self, objects: &[&SparseVec], xs: &[&SparseVec]) -> SparseVec {
        twisted_sum(
            self.source.tensor().space(),
            self.arity,
            self.source.nu(),
            objects,
            xs,
            -1,
            &|args| self.eval(args),
        )
    }

    /// `F(g)` for `g : α → β`.
    pub fn morphism(&self, alpha: &SparseVec, beta: &SparseVec, g: &SparseVec) -> SparseVec {
        self.morphism_component(&[alpha, beta], &[g])
    }
}

/// Comparison of `MC_R(A₁)` and `MC_R(A₂)` along a quasi-isomorphism.
#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub mc_source: usize,
    pub mc_target: usize,
    pub pi0_source: usize,
    pub pi0_target: usize,
    /// `f*` induces a bijection `π₀(A₁) → π₀(A₂)`.
    pub pi0_bijective: bool,
    pub pairs_checked: usize,
    /// Pairs `(i, j)` of source elements with `|Hom(α,β)| ≠ |Hom(f*α,f*β)|`.
    pub hom_mismatches: Vec<(usize, usize, u128, u128)>,
    /// Pairs of class representatives whose hom complexes have different
    /// cohomology dimensions.
    pub hom_complex_mismatches: Vec<(usize, usize)>,
    pub passed: bool,
}

/// Checks that `f_R^*` is an equivalence on the finite groupoids.
pub fn invariance_check(f: &AInfMorphism, r: &ArtinianDGAlgebra) -> Result<InvarianceReport> {
    invariance_check_with(f, r, Exec::default())
}

pub fn invariance_check_with(
    f: &AInfMorphism,
    r: &ArtinianDGAlgebra,
    exec: Exec,
) -> Result<InvarianceReport> {
    if !f.is_quasi_isomorphism()? {
        return Err(Error::Hypothesis("f₁ is not a quasi-isomorphism".into()));
    }
    let nu = r.nilpotency_index().max(2);
    let rep = f.check_with(nu + 1, exec)?;
    if !rep.report.passed() {
        return Err(Error::Hypothesis("f fails the A∞-morphism identities".into()));
    }
    let push = Pushforward::new(f, r)?;
    let s1 = &push.source;
    let s2 = &push.target;
    let mc1 = s1.enumerate_mc_with(exec, MC_ENUMERATION_CAP)?;
    let mc2 = s2.enumerate_mc_with(exec, MC_ENUMERATION_CAP)?;
    let pushed: Vec<SparseVec> = mc1.iter().map(|a| push.object(a)).collect::<Result<_>>()?;
    for p in &pushed {
        if !s2.is_mc(p)? {
            return Err(Error::Structural(format!(
                "pushforward `{}` is not Maurer–Cartan",
                s2.render(p)
            )));
        }
    }
    let p1 = s1.pi0_of(mc1.clone(), exec)?;
    let p2 = s2.pi0_of(mc2.clone(), exec)?;
    // class of every pushed element in π₀(A₂)
    let cls: Vec<Result<usize>> = exec.map(&pushed, |p| {
        for (k, &ri) in p2.representatives.iter().enumerate() {
            if s2.isomorphic(&p2.elements[ri], p)? {
                return Ok(k);
            }
        }
        Err(Error::Structural("pushforward lands outside π₀".into()))
    });
    let cls: Vec<usize> = cls.into_iter().collect::<Result<_>>()?;
    let mut image = vec![None; p2.count()];
    let mut injective = true;
    for (i, &c2) in cls.iter().enumerate() {
        let c1 = p1.class_of[i];
        match image[c2] {
            None => image[c2] = Some(c1),
            Some(prev) if prev != c1 => injective = false,
            _ => {}
        }
    }
    let pi0_bijective = injective && image.iter().all(Option::is_some);
    let pairs: Vec<(usize, usize)> = (0..mc1.len())
        .flat_map(|i| (0..mc1.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<Option<(usize, usize, u128, u128)>>> = exec.map(&pairs, |&(i, j)| {
        let h1 = s1.hom(&mc1[i], &mc1[j])?.cardinality().unwrap();
        let h2 = s2.hom(&pushed[i], &pushed[j])?.cardinality().unwrap();
        Ok((h1 != h2).then_some((i, j, h1, h2)))
    });
    let mut hom_mismatches = Vec::new();
    for r in results {
        if let Some(m) = r? {
            hom_mismatches.push(m);
        }
    }
    let rep_pairs: Vec<(usize, usize)> = p1
        .representatives
        .iter()
        .flat_map(|&i| p1.representatives.iter().map(move |&j| (i, j)))
        .collect();
    let cx: Vec<Result<bool>> = exec.map(&rep_pairs, |&(i, j)| {
        let c1 = s1.hom_complex(&mc1[i], &mc1[j])?.betti();
        let c2 = s2.hom_complex(&pushed[i], &pushed[j])?.betti();
        Ok(c1 == c2)
    });
    let mut hom_complex_mismatches = Vec::new();
    for (k, ok) in cx.into_iter().enumerate() {
        if !ok? {
            hom_complex_mismatches.push(rep_pairs[k]);
        }
    }
    let passed = p1.count() == p2.count()
        && pi0_bijective
        && hom_mismatches.is_empty()
        && hom_complex_mismatches.is_empty();
    Ok(InvarianceReport {
        mc_source: mc1.len(),
        mc_target: mc2.len(),
        pi0_source: p1.count(),
        pi0_target: p2.count(),
        pi0_bijective,
        pairs_checked: pairs.len(),
        hom_mismatches,
        hom_complex_mismatches,
        passed,
    })
}

/// `x ↦ d(x) + βx − (−1)^{|x|} xα` for a DG algebra `A`, computed
/// directly from the product of `A⊗R`.
pub fn dg_twisted_differential(s: &McSetting, alpha: &SparseVec, beta: &SparseVec, x: &SparseVec) -> SparseVec {
    let t = s.tensor();
    let f = s.field();
    let mut out = t.m_vec(&[x]);
    out.add(&t.m_vec(&[beta, x]));
    let mut parts: BTreeMap<i64, SparseVec> = BTreeMap::new();
    for (i, c) in x.iter() {
        parts.entry(t.degree(i)).or_default().add_term(i, c);
    }
    for (d, p) in parts {
        out.add_scaled(&t.m_vec(&[&p, alpha]), &-&f.sign(d));
    }
    out
}
