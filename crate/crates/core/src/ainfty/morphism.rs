//! A∞-morphisms `f = {f_n : A₁^{⊗n} → A₂}` of degree `1−n`.

use crate::ainfty::algebra::{check_degrees, decode_tuple, tuple_count, AInfAlgebra, AxiomReport};
use crate::ainfty::structure::StructureMaps;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{LinearMap, SparseVec};
use crate::signs;

#[derive(Clone, Debug)]
pub struct AInfMorphism {
    pub source: AInfAlgebra,
    pub target: AInfAlgebra,
    comps: StructureMaps,
    /// Components are known only up to this arity; `None` means all
    /// components beyond the stored ones vanish.
    known_up_to: Option<usize>,
    pub strict_unital: bool,
}

/// Result of a morphism check; arities beyond the morphism's bound are
/// reported as unchecked rather than failed.
#[derive(Clone, Debug, PartialEq)]
pub struct MorphismReport {
    pub report: AxiomReport,
    pub unchecked_from: Option<usize>,
}

/// All compositions `i_1 + … + i_s = n` with positive parts.
pub(crate) fn compositions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for i in 1..=rem {
            cur.push(i);
            rec(rem - i, cur, out);
            cur.pop();
        }
    }
    if n > 0 {
        rec(n, &mut cur, &mut out);
    }
    out
}

impl AInfMorphism {
    pub fn new(
        source: AInfAlgebra,
        target: AInfAlgebra,
        comps: StructureMaps,
        strict_unital: bool,
    ) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::MixedField(source.field(), target.field()));
        }
        check_degrees(source.space(), target.space(), &comps, |n| 1 - n as i64)?;
        let f = AInfMorphism {
            source,
            target,
            comps,
            known_up_to: None,
            strict_unital,
        };
        if strict_unital {
            f.check_unital()?;
        }
        Ok(f)
    }

    /// The identity `f₁ = id`, `f_{≥2} = 0`.
    pub fn identity(a: &AInfAlgebra) -> Self {
        let mut comps = StructureMaps::new();
        for i in 0..a.dim() {
            comps.set(vec![i], SparseVec::unit(i, a.field()));
        }
        AInfMorphism {
            source: a.clone(),
            target: a.clone(),
            comps,
            known_up_to: None,
            strict_unital: a.unit().is_some(),
        }
    }

    /// A strict morphism given by `f₁` alone.
    pub fn strict(source: AInfAlgebra, target: AInfAlgebra, f1: &LinearMap) -> Result<Self> {
        let mut comps = StructureMaps::new();
        for (i, c) in f1.cols.iter().enumerate() {
            comps.set(vec![i], c.clone());
        }
        let unital = source.unit().is_some() && target.unit().is_some();
        AInfMorphism::new(source, target, comps, unital)
    }

    pub fn comps(&self) -> &StructureMaps {
        &self.comps
    }

    /// Largest arity of a stored nonzero component.
    pub fn max_arity(&self) -> usize {
        self.comps.max_arity()
    }

    pub fn known_up_to(&self) -> Option<usize> {
        self.known_up_to
    }

    /// Marks the components as computed only up to arity `n`.
    pub fn truncated(mut self, n: usize) -> Self {
        self.known_up_to = Some(n);
        self
    }

    pub fn f(&self, inputs: &[usize]) -> SparseVec {
        self.comps.get(inputs).cloned().unwrap_or_default()
    }

    pub fn f_vec(&self, args: &[&SparseVec]) -> SparseVec {
        self.comps.eval(args, self.source.field())
    }

    pub fn f1_map(&self) -> LinearMap {
        LinearMap::new(
            self.source.field(),
            self.target.dim(),
            (0..self.source.dim()).map(|i| self.f(&[i])).collect(),
        )
    }

    fn check_unital(&self) -> Result<()> {
        let (Some(u), Some(v)) = (self.source.unit(), self.target.unit()) else {
            return Err(Error::Structural("strict unitality needs units on both sides".into()));
        };
        if self.f(&[u]) != SparseVec::unit(v, self.source.field()) {
            return Err(Error::Structural("f₁(1) ≠ 1".into()));
        }
        for n in 2..=self.comps.max_arity() {
            if self.comps.entries(n).any(|(k, _)| k.contains(&u)) {
                return Err(Error::Structural(format!("f_{n} does not vanish on the unit")));
            }
        }
        Ok(())
    }

    /// Residual of the morphism identity on a basis tuple:
    /// `Σ (−1)^ε m_s(f_{i_1} ⊗ … ⊗ f_{i_s}) − Σ (−1)^{r+st+s} f_{r+1+t}(1^r ⊗ m_s ⊗ 1^t)`
    /// with Koszul signs from the degrees `1−i_l` and `2−s` of the maps.
    pub fn residual(&self, t: &[usize]) -> SparseVec {
        let a = &self.source;
        let b = &self.target;
        let fld = a.field();
        let n = t.len();
        let degs: Vec<i64> = t.iter().map(|&i| a.degree(i)).collect();
        let mut out = SparseVec::new();
        for blocks in compositions(n) {
            let s = blocks.len();
            if s > b.arity_bound() {
                continue;
            }
            let mut args = Vec::with_capacity(s);
            let mut pos = 0;
            let mut zero = false;
            for &i in &blocks {
                let v = self.f(&t[pos..pos + i]);
                if v.is_zero() {
                    zero = true;
                    break;
                }
                args.push(v);
                pos += i;
            }
            if zero {
                continue;
            }
            let map_degs: Vec<i64> = blocks.iter().map(|&i| 1 - i as i64).collect();
            let e = signs::morphism_epsilon(&blocks) + signs::tensor_sign(&map_degs, &blocks, &degs);
            let refs: Vec<&SparseVec> = args.iter().collect();
            out.add_scaled(&b.m_vec(&refs), &fld.sign(e));
        }
        for s in 1..=n.min(a.arity_bound()) {
            for r in 0..=(n - s) {
                let tt = n - r - s;
                let Some(inner) = a.ops().get(&t[r..r + s]) else {
                    continue;
                };
                let e = signs::stasheff_sign(r, s, tt)
                    + s as i64
                    + signs::block_sign(2 - s as i64, &degs, r);
                let sg = -fld.sign(e);
                for (j, c) in inner.iter() {
                    let mut outer = t[..r].to_vec();
                    outer.push(j);
                    outer.extend_from_slice(&t[r + s..]);
                    if let Some(v) = self.comps.get(&outer) {
                        out.add_scaled(v, &(c * &sg));
                    }
                }
            }
        }
        out
    }

    pub fn check(&self, n_max: usize) -> Result<MorphismReport> {
        self.check_with(n_max, Exec::default())
    }

    /// Checks the morphism identities on all basis tuples of arity
    /// `≤ min(n_max, arity bound)`.
    pub fn check_with(&self, n_max: usize, exec: Exec) -> Result<MorphismReport> {
        if n_max == 0 {
            return Err(Error::OutOfRange("n_max must be at least 1".into()));
        }
        let upto = n_max.min(self.known_up_to.unwrap_or(n_max));
        let unchecked_from = (upto < n_max).then_some(upto + 1);
        let dim = self.source.dim();
        if dim > 0 {
            let slice = self.target.space().slice_dims();
            for n in 1..=upto {
                let count = tuple_count(dim, n)?;
                let hit = exec.find_first_index(count, |k| {
                    let t = decode_tuple(k, dim, n);
                    let deg: i64 =
                        t.iter().map(|&i| self.source.degree(i)).sum::<i64>() + 2 - n as i64;
                    if !slice.contains_key(&deg) {
                        return None;
                    }
                    let r = self.residual(&t);
                    (!r.is_zero()).then_some((t, r))
                });
                if let Some((inputs, residual)) = hit {
                    return Ok(MorphismReport {
                        report: AxiomReport::Fail {
                            n,
                            inputs,
                            residual,
                        },
                        unchecked_from,
                    });
                }
            }
        }
        Ok(MorphismReport {
            report: AxiomReport::Pass { checked_up_to: upto },
            unchecked_from,
        })
    }

    /// Components `f̃_n` on suspended inputs.
    pub fn suspended(&self) -> StructureMaps {
        let fld = self.source.field();
        self.comps.map_values(|k, v| {
            let degs: Vec<i64> = k.iter().map(|&i| self.source.degree(i)).collect();
            v.scaled(&fld.sign(signs::morphism_suspension_sign(&degs)))
        })
    }

    fn from_suspended(source: &AInfAlgebra, tilde: &StructureMaps) -> StructureMaps {
        let fld = source.field();
        tilde.map_values(|k, v| {
            let degs: Vec<i64> = k.iter().map(|&i| source.degree(i)).collect();
            v.scaled(&fld.sign(signs::morphism_suspension_sign(&degs)))
        })
    }

    /// `g ∘ f`, computed on suspensions where
    /// `(g̃∘f̃)_n = Σ g̃_s(f̃_{i_1} ⊗ … ⊗ f̃_{i_s})` carries no signs.
    pub fn then(&self, g: &AInfMorphism) -> Result<AInfMorphism> {
        if self.target.space() != g.source.space() {
            return Err(Error::Structural("morphisms are not composable".into()));
        }
        let fld = self.source.field();
        let ft = self.suspended();
        let gt = g.suspended();
        let bound = self.max_arity() * g.max_arity();
        let dim = self.source.dim();
        let mut out = StructureMaps::new();
        for n in 1..=bound {
            for k in 0..tuple_count(dim, n)? {
                let t = decode_tuple(k, dim, n);
                let mut acc = SparseVec::new();
                for blocks in compositions(n) {
                    if blocks.len() > g.max_arity() {
                        continue;
                    }
                    let mut args = Vec::new();
                    let mut pos = 0;
                    for &i in &blocks {
                        args.push(ft.get(&t[pos..pos + i]).cloned().unwrap_or_default());
                        pos += i;
                    }
                    let refs: Vec<&SparseVec> = args.iter().collect();
                    acc.add(&gt.eval(&refs, fld));
                }
                out.set(t, acc);
            }
        }
        let comps = Self::from_suspended(&self.source, &out);
        let mut h = AInfMorphism::new(
            self.source.clone(),
            g.target.clone(),
            comps,
            self.strict_unital && g.strict_unital,
        )?;
        h.known_up_to = match (self.known_up_to, g.known_up_to) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(usize::MAX).min(b.unwrap_or(usize::MAX))),
        };
        Ok(h)
    }

    /// Whether `f₁` induces an isomorphism on cohomology.
    pub fn is_quasi_isomorphism(&self) -> Result<bool> {
        let ca = self.source.m1_complex()?;
        let cb = self.target.m1_complex()?;
        let degrees: std::collections::BTreeSet<i64> = self
            .source
            .space()
            .degrees()
            .iter()
            .chain(self.target.space().degrees())
            .copied()
            .collect();
        for d in degrees {
            let ha = ca.cohomology(d);
            let hb = cb.cohomology(d);
            if ha.dim() != hb.dim() {
                return Ok(false);
            }
            let mut cols = Vec::new();
            for r in &ha.reps {
                let img = self.f_vec(&[r]);
                let c = if img.is_zero() {
                    SparseVec::new()
                } else {
                    hb.class_of(&img).ok_or_else(|| {
                        Error::Structural("f₁ does not commute with m₁".into())
                    })?
                };
                cols.push(c);
            }
            if LinearMap::new(self.source.field(), hb.dim(), cols).rank() != ha.dim() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
