//! Twisting cochains `R* → A`, the corepresenting DG algebra maps
//! `g_τ* : Ŝ_N → R`, the twisted modules `A⊗_α R` and `A⊗_α R*`, the
//! universal deformation `A⊗_{τ_A} Ŝ_N`, and the finite comparison between
//! `π₀ MC_R(A)` and algebra maps `H⁰(Ŝ_N) → R`.
//!
//! A twisting cochain is identified with an element of `A⊗R` through
//! `α = Σ_{a,j} α_{a,j} a⊗e_j ↔ τ(e_j*) = Σ_a α_{a,j} a`, with no signs.

use std::collections::HashMap;

use crate::ainfty::{tensor_index, tensor_split, AInfAlgebra, StructureMaps};
use crate::artin::ArtinianDGAlgebra;
use crate::bar::{h0_algebra, is_admissible, koszul_probe, universal_twisting_cochain, KoszulVerdict, Shat};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::graded::GradedSpace;
use crate::linalg::{enumerate_span, LinearMap, SparseVec};
use crate::mc::{McSetting, Pi0, MC_ENUMERATION_CAP};
use crate::signs;

/// A degree-1 map `τ : R* → A` killing the coaugmentation `1*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistingCochain {
    /// `τ(e_j*)` for every basis element `e_j` of `R`.
    pub values: Vec<SparseVec>,
    /// Whether `τ` lands in `Ā`.
    pub admissible: bool,
}

fn cochain_of(s: &McSetting, alpha: &SparseVec) -> TwistingCochain {
    let mut values = vec![SparseVec::new(); s.base().dim()];
    for (i, c) in alpha.iter() {
        let (a, j) = s.split(i);
        values[j].add_term(a, c);
    }
    let unit = s.algebra().unit();
    let admissible = values
        .iter()
        .all(|v| unit.map(|u| v.get(u).is_none()).unwrap_or(true));
    TwistingCochain { values, admissible }
}

/// The twisting cochain of a Maurer–Cartan element.
pub fn cochain_from_mc(s: &McSetting, alpha: &SparseVec) -> Result<TwistingCochain> {
    let res = s.mc_residual(alpha)?;
    if !res.is_zero() {
        return Err(Error::NotMaurerCartan(format!(
            "residual {}",
            s.render(&res)
        )));
    }
    Ok(cochain_of(s, alpha))
}

/// The Maurer–Cartan element of a twisting cochain.
pub fn mc_from_cochain(s: &McSetting, tau: &TwistingCochain) -> Result<SparseVec> {
    if tau.values.len() != s.base().dim() {
        return Err(Error::Structural("cochain has the wrong number of values".into()));
    }
    if !tau.values[s.base().unit()].is_zero() {
        return Err(Error::Structural("τ does not kill the coaugmentation".into()));
    }
    let mut alpha = SparseVec::new();
    for (j, v) in tau.values.iter().enumerate() {
        for (a, c) in v.iter() {
            alpha.add_term(s.index(a, j), c);
        }
    }
    let res = s.mc_residual(&alpha)?;
    if !res.is_zero() {
        return Err(Error::NotMaurerCartan(format!(
            "convolution residual {}",
            s.render(&res)
        )));
    }
    Ok(alpha)
}

/// `Δ^{(n)}(e_k*)` for all `k`, as maps from tuples `(j_1,…,j_n)` to
/// coefficients, under `(φ_1⊗…⊗φ_n)(x_1⊗…⊗x_n) = ±Πφ_i(x_i)` with the
/// Koszul rule.  Tuples containing the counit are dropped.
fn iterated_coproducts(r: &ArtinianDGAlgebra, n: usize) -> Vec<HashMap<Vec<usize>, Scalar>> {
    let dual = r.dual_coalgebra();
    let f = r.field();
    let counit = dual.counit;
    let mut level: Vec<HashMap<Vec<usize>, Scalar>> = (0..r.dim())
        .map(|k| {
            let mut m = HashMap::new();
            if k != counit {
                m.insert(vec![k], f.one());
            }
            m
        })
        .collect();
    for _ in 1..n {
        level = level
            .iter()
            .map(|terms| {
                let mut next: HashMap<Vec<usize>, Scalar> = HashMap::new();
                for (t, c) in terms {
                    for (a, b, c2) in &dual.coproduct[t[0]] {
                        if *a == counit || *b == counit {
                            continue;
                        }
                        let mut key = vec![*a, *b];
                        key.extend_from_slice(&t[1..]);
                        let e = next.entry(key).or_insert_with(|| f.zero());
                        *e = &*e + &(c * c2);
                    }
                }
                next.retain(|_, v| !v.is_zero());
                next
            })
            .collect();
    }
    level
}

impl TwistingCochain {
    /// The convolution Maurer–Cartan expression in `Hom(R*, A) ≅ A⊗R`,
    /// assembled from the iterated coproducts of `R*`:
    /// `−(m₁τ − τd) + Σ_{n≥2} (−1)^{n(n+1)/2} m_n∘τ^{⊗n}∘Δ^{(n)}`, where
    /// moving the `i`-th factor past the later ones costs `(−1)^{|e_{j_i}|}`
    /// each.
    pub fn convolution_residual(&self, s: &McSetting) -> SparseVec {
        let a = s.algebra();
        let r = s.base();
        let f = s.field();
        let dual = r.dual_coalgebra();
        let top = a.arity_bound().min(r.nilpotency_index().saturating_sub(1)).max(1);
        let mut out = SparseVec::new();
        for k in 0..r.dim() {
            let ek = SparseVec::unit(k, f);
            // n = 1
            let mut v = a.m_vec(&[&self.values[k]]);
            for (j, c) in dual.differential.cols[k].iter() {
                v.add_scaled(&self.values[j], &-c);
            }
            out.add_scaled(&s.tensor_of(&v, &ek), &f.sign(1));
        }
        for n in 2..=top {
            let sg = f.sign(signs::mc_sign(n));
            for (k, terms) in iterated_coproducts(r, n).iter().enumerate() {
                let ek = SparseVec::unit(k, f);
                for (t, c) in terms {
                    let args: Vec<&SparseVec> = t.iter().map(|&j| &self.values[j]).collect();
                    if args.iter().any(|v| v.is_zero()) {
                        continue;
                    }
                    let e: i64 = t
                        .iter()
                        .enumerate()
                        .map(|(i, &j)| (n - 1 - i) as i64 * r.degree(j))
                        .sum();
                    let v = a.m_vec(&args);
                    out.add_scaled(&s.tensor_of(&v, &ek), &(&(c * &sg) * &f.sign(e)));
                }
            }
        }
        out
    }
}

/// The DG algebra map `g_τ* : Ŝ_N → R` dual to `g_τ : R* → BĀ`, stored by
/// its values on the word basis `φ_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorepresentingHom {
    pub order: usize,
    /// `g_τ*(φ_w)` for every basis element of `Ŝ_N`.
    pub images: Vec<SparseVec>,
}

impl CorepresentingHom {
    /// `φ_{[a]} ↦ r_a` where `α = Σ a⊗r_a`, extended by
    /// `g(φ_{[a|w]}) = (−1)^{|φ_{[a]}||φ_w|} r_a·g(φ_w)`.  No checks.
    pub fn build(s: &McSetting, shat: &Shat, tau: &TwistingCochain) -> Result<Self> {
        let a = s.algebra();
        if shat.bar().algebra().dim() != a.dim() {
            return Err(Error::Structural("Ŝ_N belongs to a different algebra".into()));
        }
        let r = s.base();
        let f = s.field();
        let mut ra = vec![SparseVec::new(); a.dim()];
        for (j, v) in tau.values.iter().enumerate() {
            for (l, c) in v.iter() {
                ra[l].add_term(j, c);
            }
        }
        let bar = shat.bar();
        let sdeg = shat.alg().space();
        let mut images: Vec<SparseVec> = Vec::with_capacity(shat.dim());
        for (i, w) in bar.words().iter().enumerate() {
            let v = if w.is_empty() {
                SparseVec::unit(r.unit(), f)
            } else {
                let rest = bar.index_of(&w[1..]).expect("suffixes are words");
                let da = 1 - a.degree(w[0]);
                let sg = f.sign(da * sdeg.degree(rest));
                r.mul(&ra[w[0]], &images[rest]).scaled(&sg)
            };
            debug_assert_eq!(images.len(), i);
            images.push(v);
        }
        Ok(CorepresentingHom {
            order: shat.order(),
            images,
        })
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in v.iter() {
            out.add_scaled(&self.images[i], c);
        }
        out
    }

    /// First basis pair `(u, v)` with `g(φ_uφ_v) ≠ g(φ_u)g(φ_v)`.
    pub fn multiplicativity_failure(&self, shat: &Shat, r: &ArtinianDGAlgebra) -> Option<(usize, usize)> {
        for i in 0..shat.dim() {
            for j in 0..shat.dim() {
                let lhs = self.apply(&shat.alg().m(&[i, j]));
                let rhs = r.mul(&self.images[i], &self.images[j]);
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// First basis element `φ_w` with `g(dφ_w) ≠ d g(φ_w)`.
    pub fn differential_failure(&self, shat: &Shat, r: &ArtinianDGAlgebra) -> Option<usize> {
        (0..shat.dim()).find(|&i| self.apply(&shat.alg().m(&[i])) != r.d(&self.images[i]))
    }

    /// `g(1) = 1` and every positive-weight functional lands in `m`.
    pub fn is_augmented(&self, r: &ArtinianDGAlgebra) -> bool {
        self.images[0] == SparseVec::unit(r.unit(), r.field())
            && self.images[1..]
                .iter()
                .all(|v| v.indices().all(|i| r.layer(i) >= 1))
    }

    /// `(1⊗g)(τ_A)`, which must give back `α` (that is, `τ_A∘g_τ = τ`).
    pub fn pushed_universal_cochain(&self, s: &McSetting, shat: &Shat) -> Result<SparseVec> {
        let tau_a = universal_twisting_cochain(s.algebra(), shat)?;
        let mut out = SparseVec::new();
        for (i, c) in tau_a.iter() {
            let (l, w) = tensor_split(i, shat.dim());
            let img = SparseVec::unit(l, s.field());
            out.add_scaled(&s.tensor_of(&img, &self.images[w]), c);
        }
        Ok(out)
    }

    /// Whether `g_{N'} = g_N ∘ (Ŝ_{N'} → Ŝ_N)` for `self` at the larger
    /// order `N'`.
    pub fn factors_through_tower(&self, big: &Shat, smaller: &CorepresentingHom, small: &Shat) -> bool {
        big.tower_map(small)
            .iter()
            .enumerate()
            .all(|(i, m)| match m {
                Some(j) => self.images[i] == smaller.images[*j],
                None => self.images[i].is_zero(),
            })
    }
}

/// Builds `g_τ*` and certifies it: augmented, multiplicative on every pair
/// of basis functionals, compatible with the differentials, and
/// recovering `τ` from `τ_A`.
pub fn corepresenting_hom(s: &McSetting, shat: &Shat, tau: &TwistingCochain) -> Result<CorepresentingHom> {
    if !tau.admissible {
        return Err(Error::Hypothesis("the twisting cochain does not land in Ā".into()));
    }
    let g = CorepresentingHom::build(s, shat, tau)?;
    let r = s.base();
    if let Some((i, j)) = g.multiplicativity_failure(shat, r) {
        return Err(Error::Hypothesis(format!(
            "g_τ* is not multiplicative on ({}, {}); the truncation order {} is too small for ν = {}",
            shat.alg().label(i),
            shat.alg().label(j),
            shat.order(),
            r.nilpotency_index()
        )));
    }
    if let Some(i) = g.differential_failure(shat, r) {
        return Err(Error::Structural(format!(
            "g_τ* does not commute with d on {}",
            shat.alg().label(i)
        )));
    }
    if !g.is_augmented(r) {
        return Err(Error::Structural("g_τ* is not augmented".into()));
    }
    let alpha = mc_from_cochain(s, tau)?;
    if g.pushed_universal_cochain(s, shat)? != alpha {
        return Err(Error::Structural("τ_A∘g_τ differs from τ".into()));
    }
    Ok(g)
}

/// A right `A∞`-module over `A` on a finite basis, with operations
/// `m_n(m, a_1, …, a_{n−1})` tabulated on basis tuples (first index in the
/// module, the rest in `A`).
#[derive(Clone, Debug)]
pub struct TwistedModule {
    field: Field,
    space: GradedSpace,
    a: AInfAlgebra,
    ops: StructureMaps,
    arity: usize,
}

fn a_tuples(dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..dim).map(move |i| {
                    let mut t2 = t.clone();
                    t2.push(i);
                    t2
                })
            })
            .collect();
    }
    out
}

impl TwistedModule {
    /// `A⊗_α R` with `m_n(m, a_1, …) = m_n^{0,…,0,α}(m, a_1⊗1, …)`.  The
    /// element `α` is not required to be Maurer–Cartan.
    pub fn build(s: &McSetting, alpha: &SparseVec) -> Result<Self> {
        let a = s.algebra();
        let f = s.field();
        let arity = a.arity_bound();
        let zero = SparseVec::new();
        let ru = s.base().unit();
        let embedded: Vec<SparseVec> = (0..a.dim())
            .map(|i| SparseVec::unit(s.index(i, ru), f))
            .collect();
        let mut ops = StructureMaps::new();
        for n in 1..=arity {
            let mut objects: Vec<&SparseVec> = vec![&zero; n];
            objects.push(alpha);
            for t in a_tuples(a.dim(), n - 1) {
                for m in 0..s.dim() {
                    let em = SparseVec::unit(m, f);
                    let mut xs: Vec<&SparseVec> = vec![&em];
                    xs.extend(t.iter().map(|&i| &embedded[i]));
                    let v = s.op(&objects, &xs);
                    if !v.is_zero() {
                        let mut key = vec![m];
                        key.extend_from_slice(&t);
                        ops.set(key, v);
                    }
                }
            }
        }
        Ok(TwistedModule {
            field: f,
            space: s.space().clone(),
            a: a.clone(),
            ops,
            arity,
        })
    }

    /// `A⊗_α R* = (A⊗_α R)⊗_R R*`, on the basis `a⊗e_j*`, with `R` acting
    /// on `R*` by `(p·φ)(x) = (−1)^{|p|}φ(xp)`.
    pub fn build_dual(s: &McSetting, alpha: &SparseVec) -> Result<Self> {
        let m = Self::build(s, alpha)?;
        let a = s.algebra();
        let r = s.base();
        let f = s.field();
        let dr = r.dim();
        let dual = r.dual_coalgebra();
        let space = GradedSpace::new((0..a.dim()).flat_map(|b| {
            (0..dr).map(move |j| (format!("{}⊗{}*", a.label(b), r.label(j)), a.degree(b) - r.degree(j)))
        }))?;
        // left action of e_p on e_j*
        let mut act: HashMap<(usize, usize), SparseVec> = HashMap::new();
        for (key, v) in r.alg().ops().entries(2) {
            let (k, p) = (key[0], key[1]);
            for (j, c) in v.iter() {
                let e = act.entry((p, j)).or_default();
                e.add_term(k, &(c * &f.sign(r.degree(p))));
            }
        }
        let times = |v: &SparseVec, j: usize| -> SparseVec {
            let mut out = SparseVec::new();
            for (i, c) in v.iter() {
                let (a2, p) = s.split(i);
                if let Some(w) = act.get(&(p, j)) {
                    for (k, c2) in w.iter() {
                        out.add_term(tensor_index(a2, k, dr), &(c * c2));
                    }
                }
            }
            out
        };
        let mut ops = StructureMaps::new();
        for (key, v) in m.ops.all_entries() {
            let (b, p) = s.split(key[0]);
            if p != r.unit() {
                continue;
            }
            let adeg: i64 = key[1..].iter().map(|&i| a.degree(i)).sum();
            for j in 0..dr {
                let sg = f.sign(-r.degree(j) * adeg);
                let out = times(v, j).scaled(&sg);
                let mut k2 = vec![tensor_index(b, j, dr)];
                k2.extend_from_slice(&key[1..]);
                ops.add(k2, &out);
            }
        }
        for b in 0..a.dim() {
            for j in 0..dr {
                let dphi = &dual.differential.cols[j];
                if dphi.is_zero() {
                    continue;
                }
                let mut out = SparseVec::new();
                for (k, c) in dphi.iter() {
                    out.add_term(tensor_index(b, k, dr), &(c * &f.sign(a.degree(b))));
                }
                ops.add(vec![tensor_index(b, j, dr)], &out);
            }
        }
        Ok(TwistedModule {
            field: f,
            space,
            a: a.clone(),
            ops,
            arity: m.arity,
        })
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn ops(&self) -> &StructureMaps {
        &self.ops
    }

    /// `m_n(m, a_1, …, a_{n−1})` on basis indices.
    pub fn op(&self, key: &[usize]) -> SparseVec {
        self.ops.get(key).cloned().unwrap_or_default()
    }

    /// `m_n(v, a_1, …)` for a module vector `v`.
    pub fn op_vec(&self, v: &SparseVec, a: &[usize]) -> SparseVec {
        let mut out = SparseVec::new();
        let mut key = Vec::with_capacity(a.len() + 1);
        for (i, c) in v.iter() {
            key.clear();
            key.push(i);
            key.extend_from_slice(a);
            if let Some(w) = self.ops.get(&key) {
                out.add_scaled(w, c);
            }
        }
        out
    }

    pub fn differential(&self) -> LinearMap {
        let cols = (0..self.dim()).map(|i| self.op(&[i])).collect();
        LinearMap::new(self.field, self.dim(), cols)
    }

    /// First basis element with `m₁(m₁(m)) ≠ 0`, as a witness.
    pub fn d_squared_failure(&self) -> Option<(usize, SparseVec)> {
        let d = self.differential();
        (0..self.dim()).find_map(|i| {
            let v = d.apply(&d.apply(&SparseVec::unit(i, self.field)));
            (!v.is_zero()).then_some((i, v))
        })
    }

    /// The module Stasheff residual on `(m, a_1, …, a_{n−1})`: the sum of
    /// `(−1)^{r+st+s·Σ_{i≤r}|x_i|} m(x_1,…,x_r, μ_s(x_{r+1},…), …)` with
    /// `μ_s` the module operation when `r = 0` and `m_s^A` otherwise.
    pub fn residual(&self, t: &[usize]) -> SparseVec {
        let n = t.len();
        let f = self.field;
        let degs: Vec<i64> = t
            .iter()
            .enumerate()
            .map(|(k, &i)| if k == 0 { self.space.degree(i) } else { self.a.degree(i) })
            .collect();
        let mut out = SparseVec::new();
        let mut prefix = 0i64;
        for r in 0..n {
            for s in 1..=(n - r) {
                let tt = n - r - s;
                let e = signs::stasheff_sign(r, s, tt) + s as i64 * prefix;
                let sg = f.sign(e);
                if r == 0 {
                    let inner = self.op(&t[..s]);
                    out.add_scaled(&self.op_vec(&inner, &t[s..]), &sg);
                } else {
                    let inner = self.a.m(&t[r..r + s]);
                    for (j, c) in inner.iter() {
                        let mut key: Vec<usize> = t[..r].to_vec();
                        key.push(j);
                        key.extend_from_slice(&t[r + s..]);
                        out.add_scaled(&self.op(&key), &(c * &sg));
                    }
                }
            }
            prefix += degs[r];
        }
        out
    }

    /// First tuple of arity `≤ n_max` with a nonzero residual, with the
    /// residual as witness.
    pub fn axiom_failure(&self, n_max: usize) -> Option<(Vec<usize>, SparseVec)> {
        for n in 1..=n_max {
            for tail in a_tuples(self.a.dim(), n - 1) {
                for m in 0..self.dim() {
                    let mut t = vec![m];
                    t.extend_from_slice(&tail);
                    let v = self.residual(&t);
                    if !v.is_zero() {
                        return Some((t, v));
                    }
                }
            }
        }
        None
    }

    /// For `A⊗_α R`: checks right `R`-linearity of `m_{n≥2}` with the
    /// Koszul sign `(−1)^{|r|Σ|a_i|}` and the Leibniz rule for `m₁`.
    /// Returns the first failing `(module index, r, a-tuple)`.
    pub fn r_linearity_failure(&self, s: &McSetting) -> Option<(usize, usize, Vec<usize>)> {
        let r = s.base();
        let f = self.field;
        let times = |v: &SparseVec, q: usize| -> SparseVec {
            let mut out = SparseVec::new();
            for (i, c) in v.iter() {
                let (a, p) = s.split(i);
                let prod = r.mul(&SparseVec::unit(p, f), &SparseVec::unit(q, f));
                out.add_scaled(&s.tensor_of(&SparseVec::unit(a, f), &prod), c);
            }
            out
        };
        for n in 1..=self.arity {
            for tail in a_tuples(self.a.dim(), n - 1) {
                let adeg: i64 = tail.iter().map(|&i| self.a.degree(i)).sum();
                for m in 0..self.dim() {
                    let em = SparseVec::unit(m, f);
                    for q in 0..r.dim() {
                        let lhs = self.op_vec(&times(&em, q), &tail);
                        let mut rhs = times(&self.op_vec(&em, &tail), q)
                            .scaled(&f.sign(r.degree(q) * adeg));
                        if n == 1 {
                            let dq = r.d(&SparseVec::unit(q, f));
                            let mut extra = SparseVec::new();
                            for (k, c) in dq.iter() {
                                extra.add_scaled(&times(&em, k), c);
                            }
                            rhs.add_scaled(&extra, &f.sign(self.space.degree(m)));
                        }
                        if lhs != rhs {
                            return Some((m, q, tail));
                        }
                    }
                }
            }
        }
        None
    }
}

/// `A⊗_α R`, refusing non-Maurer–Cartan `α` with a `d² ≠ 0` witness.
pub fn twisted_module(s: &McSetting, alpha: &SparseVec) -> Result<TwistedModule> {
    let m = TwistedModule::build(s, alpha)?;
    refuse_curved(s, alpha, &m)?;
    Ok(m)
}

/// `A⊗_α R*`, refusing non-Maurer–Cartan `α` with a `d² ≠ 0` witness.
pub fn twisted_comodule(s: &McSetting, alpha: &SparseVec) -> Result<TwistedModule> {
    let m = TwistedModule::build_dual(s, alpha)?;
    refuse_curved(s, alpha, &m)?;
    Ok(m)
}

fn refuse_curved(s: &McSetting, alpha: &SparseVec, m: &TwistedModule) -> Result<()> {
    if s.is_mc(alpha)? {
        return Ok(());
    }
    let witness = match m.d_squared_failure() {
        Some((i, v)) => format!(
            "m₁²({}) = {}",
            m.space().label(i),
            m.space().render(&v)
        ),
        None => "m₁² = 0 although the residual is nonzero".into(),
    };
    Err(Error::NotMaurerCartan(witness))
}

/// The module map `A⊗_α R → A⊗_β R` induced by `g ∈ G(α,β)`, with
/// components `f_n(m, a_1, …) = m_{n+1}^{0,…,0,α,β}(g, m, a_1⊗1, …)`.
#[derive(Clone, Debug)]
pub struct GaugeModuleMap {
    pub f1: LinearMap,
    pub invertible: bool,
    /// First `(m, a-tuple)` on which the `A∞`-module morphism identity
    /// fails, if any.
    pub identity_failure: Option<Vec<usize>>,
}

pub fn gauge_module_map(
    s: &McSetting,
    alpha: &SparseVec,
    beta: &SparseVec,
    g: &SparseVec,
    n_max: usize,
) -> Result<GaugeModuleMap> {
    if !s.is_morphism(alpha, beta, g) {
        return Err(Error::Structural("g is not in G(α,β)".into()));
    }
    let a = s.algebra();
    let f = s.field();
    let zero = SparseVec::new();
    let cols = (0..s.dim())
        .map(|m| s.op(&[&zero, alpha, beta], &[g, &SparseVec::unit(m, f)]))
        .collect();
    let f1 = LinearMap::new(f, s.dim(), cols);
    let invertible = f1.rank() == s.dim();
    let ru = s.base().unit();
    let embedded: Vec<SparseVec> = (0..a.dim())
        .map(|i| SparseVec::unit(s.index(i, ru), f))
        .collect();
    let mut identity_failure = None;
    'outer: for n in 1..=n_max {
        let mut objects: Vec<&SparseVec> = vec![&zero; n];
        objects.push(alpha);
        objects.push(beta);
        for tail in a_tuples(a.dim(), n - 1) {
            for m in 0..s.dim() {
                let em = SparseVec::unit(m, f);
                let mut xs: Vec<&SparseVec> = vec![g, &em];
                xs.extend(tail.iter().map(|&i| &embedded[i]));
                let res = s.category_residual(&objects, &xs)?;
                if !res.is_zero() {
                    let mut t = vec![m];
                    t.extend_from_slice(&tail);
                    identity_failure = Some(t);
                    break 'outer;
                }
            }
        }
    }
    Ok(GaugeModuleMap {
        f1,
        invertible,
        identity_failure,
    })
}

/// The universal deformation `A⊗_{τ_A} Ŝ_N` over the truncation `Ŝ_N`,
/// together with its setting and `τ_A`.
pub fn universal_deformation(a: &AInfAlgebra, order: usize) -> Result<(Shat, McSetting, SparseVec, TwistedModule)> {
    let shat = Shat::new(a, order)?;
    let base = shat.artinian()?;
    let s = McSetting::new(a, &base)?;
    let tau = universal_twisting_cochain(a, &shat)?;
    let m = twisted_module(&s, &tau)?;
    Ok((shat, s, tau, m))
}

/// A finite presentation of `H⁰(Ŝ_N)`: generators are the weight-1
/// classes, and relations are the linear dependencies among the classes of
/// generator words of length `≤ N`.  Words longer than `N` are zero in
/// `Ŝ_N`; this matters only for bases with `m^{N+1} ≠ 0`, which the
/// comparison refuses.
#[derive(Clone, Debug)]
pub struct H0Presentation {
    pub order: usize,
    /// Cocycle representatives in `Ŝ_N` of the generators.
    pub generator_reps: Vec<SparseVec>,
    pub generator_labels: Vec<String>,
    /// Generator words (by generator position), length-lexicographic.
    pub words: Vec<Vec<usize>>,
    /// Relations as vectors over `words`.
    pub relations: Vec<SparseVec>,
    pub weight_dims: Vec<usize>,
    pub commutative: bool,
}

pub fn h0_presentation(shat: &Shat) -> Result<H0Presentation> {
    let c = shat.alg().m1_complex()?;
    let h0 = h0_algebra(shat, &c)?;
    let f = shat.field();
    let gens = h0.generators();
    let unit = h0
        .classes
        .class_of(&SparseVec::unit(0, f))
        .ok_or_else(|| Error::Structural("the unit of Ŝ_N is not a cocycle".into()))?;
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut classes: Vec<SparseVec> = vec![unit];
    let mut layer: Vec<usize> = vec![0];
    for _ in 0..shat.order() {
        let mut next = Vec::new();
        for &w in &layer {
            for (gi, &g) in gens.iter().enumerate() {
                let mut word = words[w].clone();
                word.push(gi);
                let cl = h0.mul(&classes[w], &SparseVec::unit(g, f));
                next.push(words.len());
                words.push(word);
                classes.push(cl);
            }
        }
        layer = next;
    }
    let map = LinearMap::new(f, h0.dim(), classes);
    if map.rank() != h0.dim() {
        return Err(Error::Structural(
            "the weight-1 classes do not generate H⁰(Ŝ_N)".into(),
        ));
    }
    let relations = map.kernel();
    let generator_reps: Vec<SparseVec> = gens.iter().map(|&g| h0.classes.reps[g].clone()).collect();
    let generator_labels = generator_reps
        .iter()
        .map(|v| shat.alg().render(v))
        .collect();
    Ok(H0Presentation {
        order: shat.order(),
        generator_reps,
        generator_labels,
        words,
        relations,
        weight_dims: h0.weight_dims.clone(),
        commutative: h0.generators_commute(),
    })
}

impl H0Presentation {
    /// Whether generator images `r_i` satisfy every relation in `R`.
    pub fn respects_relations(&self, r: &ArtinianDGAlgebra, images: &[SparseVec]) -> bool {
        let f = r.field();
        let mut values: Vec<SparseVec> = Vec::with_capacity(self.words.len());
        for w in &self.words {
            let v = match w.split_last() {
                None => SparseVec::unit(r.unit(), f),
                Some((&last, init)) => {
                    let p = self.words.iter().position(|u| u.as_slice() == init).unwrap();
                    r.mul(&values[p], &images[last])
                }
            };
            values.push(v);
        }
        self.relations.iter().all(|rel| {
            let mut acc = SparseVec::new();
            for (k, c) in rel.iter() {
                acc.add_scaled(&values[k], c);
            }
            acc.is_zero()
        })
    }
}

/// The outcome of comparing `π₀ MC_R(A)` with algebra maps
/// `H⁰(Ŝ_N) → R` (up to conjugation by units of `R`).
#[derive(Clone, Debug)]
pub struct ProrepReport {
    pub order: usize,
    pub presentation: H0Presentation,
    /// Every unital augmented algebra map, as its generator images.
    pub maps: Vec<Vec<SparseVec>>,
    /// Conjugation orbit of every map.
    pub orbit_of: Vec<usize>,
    pub pi0: Pi0,
    /// For every Maurer–Cartan element, the map `g_τ* ∘ section` it induces.
    pub induced: Vec<usize>,
    /// `(π₀ class, orbit)` pairs of the induced correspondence.
    pub matching: Vec<(usize, usize)>,
    /// Number of orbits of algebra maps.
    pub lhs: usize,
    /// `|π₀|`.
    pub rhs: usize,
    pub bijective: bool,
}

/// The comparison for a classical commutative base.
pub fn prorep_compare(a: &AInfAlgebra, r: &ArtinianDGAlgebra, order: Option<usize>) -> Result<ProrepReport> {
    if !r.is_commutative() {
        return Err(Error::Hypothesis(
            "the base is not commutative; use the comparison modulo conjugation".into(),
        ));
    }
    prorep_core(a, r, order)
}

/// The comparison for a classical, possibly non-commutative base, with
/// algebra maps taken modulo conjugation by units of `R`.
pub fn prorep_compare_noncomm(a: &AInfAlgebra, r: &ArtinianDGAlgebra, order: Option<usize>) -> Result<ProrepReport> {
    prorep_core(a, r, order)
}

fn conjugation_orbits(r: &ArtinianDGAlgebra, maps: &[Vec<SparseVec>]) -> Result<Vec<usize>> {
    let index: HashMap<&Vec<SparseVec>, usize> = maps.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let units = r.units()?;
    let pairs: Vec<(SparseVec, SparseVec)> = units
        .iter()
        .map(|u| {
            let inv = r.inverse(u).expect("units are invertible");
            (u.clone(), inv)
        })
        .collect();
    let mut orbit_of = vec![usize::MAX; maps.len()];
    let mut next = 0;
    for i in 0..maps.len() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        for (u, inv) in &pairs {
            let conj: Vec<SparseVec> = maps[i].iter().map(|x| r.mul(&r.mul(u, x), inv)).collect();
            let j = *index
                .get(&conj)
                .ok_or_else(|| Error::Structural("conjugate of an algebra map is not a map".into()))?;
            orbit_of[j] = next;
        }
        next += 1;
    }
    Ok(orbit_of)
}

fn prorep_core(a: &AInfAlgebra, r: &ArtinianDGAlgebra, order: Option<usize>) -> Result<ProrepReport> {
    if !is_admissible(a) {
        return Err(Error::Hypothesis("A is not admissible".into()));
    }
    if !r.is_classical() {
        return Err(Error::Hypothesis("the base is not concentrated in degree 0 with d = 0".into()));
    }
    let f = a.field();
    if !f.is_finite() {
        return Err(Error::InfiniteField);
    }
    let nu = r.nilpotency_index();
    let order = order.unwrap_or(nu);
    if order < nu {
        return Err(Error::Hypothesis(format!(
            "truncation order {order} is below the nilpotency index {nu}"
        )));
    }
    let probe = koszul_probe(a, order, None)?;
    if let KoszulVerdict::FailsAt { degree, .. } = probe.verdict {
        return Err(Error::Hypothesis(format!(
            "Koszul property not established at order {order}: stable H^{degree} ≠ 0"
        )));
    }
    let shat = Shat::new(a, order)?;
    let presentation = h0_presentation(&shat)?;
    let m_basis: Vec<SparseVec> = r
        .maximal_ideal()
        .into_iter()
        .map(|i| SparseVec::unit(i, f))
        .collect();
    let m_elems = enumerate_span(f, &m_basis)?;
    let g = presentation.generator_reps.len();
    let needed = (m_elems.len() as u128).checked_pow(g as u32).unwrap_or(u128::MAX);
    if needed > MC_ENUMERATION_CAP as u128 {
        return Err(Error::CapExceeded {
            needed,
            cap: MC_ENUMERATION_CAP as u128,
        });
    }
    let mut maps = Vec::new();
    let mut digits = vec![0usize; g];
    loop {
        let images: Vec<SparseVec> = digits.iter().map(|&d| m_elems[d].clone()).collect();
        if presentation.respects_relations(r, &images) {
            maps.push(images);
        }
        let mut k = 0;
        while k < g {
            digits[k] += 1;
            if digits[k] < m_elems.len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
        if k == g {
            break;
        }
    }
    let orbit_of = conjugation_orbits(r, &maps)?;
    let lhs = orbit_of.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    let s = McSetting::new(a, r)?;
    let pi0 = s.pi0()?;
    let index: HashMap<&Vec<SparseVec>, usize> = maps.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut induced = Vec::with_capacity(pi0.elements.len());
    for alpha in &pi0.elements {
        let tau = cochain_from_mc(&s, alpha)?;
        let gt = corepresenting_hom(&s, &shat, &tau)?;
        let img: Vec<SparseVec> = presentation.generator_reps.iter().map(|v| gt.apply(v)).collect();
        let k = *index.get(&img).ok_or_else(|| {
            Error::Structural("an MC element induces a map outside the enumerated ones".into())
        })?;
        induced.push(k);
    }
    let rhs = pi0.count();
    let mut class_orbit: Vec<Option<usize>> = vec![None; rhs];
    let mut well_defined = true;
    for (e, &k) in induced.iter().enumerate() {
        let c = pi0.class_of[e];
        match class_orbit[c] {
            None => class_orbit[c] = Some(orbit_of[k]),
            Some(o) if o != orbit_of[k] => well_defined = false,
            _ => {}
        }
    }
    let matching: Vec<(usize, usize)> = class_orbit
        .iter()
        .enumerate()
        .filter_map(|(c, o)| o.map(|o| (c, o)))
        .collect();
    let mut hit = vec![false; lhs];
    let mut injective = true;
    for &(_, o) in &matching {
        if hit[o] {
            injective = false;
        }
        hit[o] = true;
    }
    let bijective = well_defined && injective && hit.iter().all(|&h| h) && matching.len() == rhs;
    Ok(ProrepReport {
        order,
        presentation,
        maps,
        orbit_of,
        pi0,
        induced,
        matching,
        lhs,
        rhs,
        bijective,
    })
}

/// Naturality of the comparison along `R → R/m^k`: projecting an MC
/// element and then taking its induced map agrees with taking the induced
/// map and projecting the generator images, for every MC element of `R`.
/// Both sides are computed at the truncation order `N` of `big`.
pub fn prorep_naturality(a: &AInfAlgebra, r: &ArtinianDGAlgebra, k: usize, order: usize) -> Result<bool> {
    let q = r.quotient_by_power(k)?;
    let big = prorep_core(a, r, Some(order))?;
    let small = prorep_core(a, &q.ring, Some(order))?;
    let s = McSetting::new(a, r)?;
    let s2 = McSetting::new(a, &q.ring)?;
    let pos: HashMap<&SparseVec, usize> = small.pi0.elements.iter().enumerate().map(|(i, v)| (v, i)).collect();
    for (e, alpha) in big.pi0.elements.iter().enumerate() {
        let mut proj = SparseVec::new();
        for (i, c) in alpha.iter() {
            let (x, j) = s.split(i);
            if let Some(j2) = q.projection[j] {
                proj.add_term(s2.index(x, j2), c);
            }
        }
        let Some(&e2) = pos.get(&proj) else { return Ok(false) };
        let down: Vec<SparseVec> = big.maps[big.induced[e]].iter().map(|v| q.project(v)).collect();
        if small.maps[small.induced[e2]] != down {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
