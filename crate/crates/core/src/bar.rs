//! Weight truncations of the bar coalgebra `BĀ`, the dual DG algebras
//! `Ŝ_N`, their cohomology, the universal twisting cochain and the bar
//! complex `BĀ⊗_τA`.
//!
//! Words are tuples of basis indices of `A` lying in `Ā`, read as
//! `[sa_1|…|sa_n]` with `|sa| = |a| − 1`, and ordered length-lexicographically
//! in the basis order of `Ā`.

use std::collections::{BTreeMap, HashMap};

use crate::ainfty::{tensor_index, tensor_with_dg, AInfAlgebra, StructureMaps};
use crate::artin::ArtinianDGAlgebra;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{Field, Scalar};
use crate::graded::{Complex, GradedSpace};
use crate::linalg::{Echelon, LinearMap, Solver, SparseVec};

/// All words of length `≤ n` over `letters`, length-lexicographic.
fn generate_words(letters: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(layer.len() * letters.len());
        for w in &layer {
            for &l in letters {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Applies the coderivation extending the maps `b` to a word: the sum over
/// all consecutive subwords `w[r..r+s]` of
/// `(−1)^{Σ_{i<r} |sw_i|} [w[..r] | b_s(w[r..r+s]) | w[r+s..]]`.
fn coderivation(
    a: &AInfAlgebra,
    b: &StructureMaps,
    word: &[usize],
    mut emit: impl FnMut(Vec<usize>, Scalar),
) {
    let f = a.field();
    let n = word.len();
    let mut prefix_deg = 0i64;
    for r in 0..n {
        for s in 1..=(n - r).min(a.arity_bound()) {
            let Some(v) = b.get(&word[r..r + s]) else { continue };
            let sg = f.sign(prefix_deg);
            for (l, c) in v.iter() {
                let mut w = Vec::with_capacity(n - s + 1);
                w.extend_from_slice(&word[..r]);
                w.push(l);
                w.extend_from_slice(&word[r + s..]);
                emit(w, c * &sg);
            }
        }
        prefix_deg += a.degree(word[r]) - 1;
    }
}

fn word_label(a: &AInfAlgebra, w: &[usize]) -> String {
    format!(
        "[{}]",
        w.iter().map(|&i| a.label(i)).collect::<Vec<_>>().join("|")
    )
}

/// Whether `A` is admissible: `Ā` in degrees `≥ 1` and `A⁰ = k·1`.
pub fn is_admissible(a: &AInfAlgebra) -> bool {
    let Some(u) = a.unit() else { return false };
    a.is_augmented()
        && (0..a.dim()).all(|i| i == u || a.degree(i) >= 1)
}

/// `⊕_{w≤N} (Ā[1])^{⊗w}` with the bar differential and deconcatenation.
#[derive(Clone, Debug)]
pub struct BarTruncation {
    a: AInfAlgebra,
    order: usize,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    space: GradedSpace,
    d: LinearMap,
}

impl BarTruncation {
    pub fn new(a: &AInfAlgebra, order: usize) -> Result<Self> {
        Self::with_exec(a, order, Exec::default())
    }

    pub fn with_exec(a: &AInfAlgebra, order: usize, exec: Exec) -> Result<Self> {
        let letters = a.augmentation_ideal()?;
        let words = generate_words(&letters, order);
        if words.len() > 1 << 20 {
            return Err(Error::CapExceeded {
                needed: words.len() as u128,
                cap: 1 << 20,
            });
        }
        let index: HashMap<Vec<usize>, usize> =
            words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let space = GradedSpace::new(words.iter().map(|w| {
            (
                word_label(a, w),
                w.iter().map(|&i| a.degree(i) - 1).sum::<i64>(),
            )
        }))?;
        let b = a.b_from_m();
        let cols = exec.map(&words, |w| {
            let mut v = SparseVec::new();
            coderivation(a, &b, w, |w2, c| {
                let j = index[&w2];
                v.add_term(j, &c);
            });
            v
        });
        let d = LinearMap::new(a.field(), words.len(), cols);
        Ok(BarTruncation {
            a: a.clone(),
            order,
            words,
            index,
            space,
            d,
        })
    }

    pub fn algebra(&self) -> &AInfAlgebra {
        &self.a
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn index_of(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn weight(&self, i: usize) -> usize {
        self.words[i].len()
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn differential(&self) -> &LinearMap {
        &self.d
    }

    /// `d_bar` on a word.
    pub fn d_word(&self, w: &[usize]) -> SparseVec {
        self.d.cols[self.index[w]].clone()
    }

    /// Deconcatenation `Δ[w] = Σ [w[..k]] ⊗ [w[k..]]`.
    pub fn coproduct(&self, i: usize) -> Vec<(usize, usize)> {
        let w = &self.words[i];
        (0..=w.len())
            .map(|k| (self.index[&w[..k]], self.index[&w[k..]]))
            .collect()
    }

    /// First word on which `d_bar² ≠ 0`, if any.
    pub fn d_squared_failure(&self) -> Option<(usize, SparseVec)> {
        (0..self.dim()).find_map(|j| {
            let v = self.d.apply(&self.d.cols[j]);
            (!v.is_zero()).then_some((j, v))
        })
    }

    /// `d_bar` never raises weight.
    pub fn respects_weight(&self) -> bool {
        self.d
            .cols
            .iter()
            .enumerate()
            .all(|(j, c)| c.indices().all(|i| self.weight(i) <= self.weight(j)))
    }

    pub fn complex(&self) -> Result<Complex> {
        Complex::new(self.field(), self.space.clone(), self.d.clone())
    }

    /// Number of words of each weight.
    pub fn weight_slice_dims(&self) -> Vec<usize> {
        let mut v = vec![0; self.order + 1];
        for w in &self.words {
            v[w.len()] += 1;
        }
        v
    }
}

/// `Ŝ_N`, the graded dual of the weight-`≤N` bar truncation: `φ_w` of
/// degree `−|w|`, product `φ_u φ_v = (−1)^{|φ_u||φ_v|} φ_{uv}` (zero past
/// weight `N`) and `dφ = −(−1)^{|φ|} φ∘d_bar`.
#[derive(Clone, Debug)]
pub struct Shat {
    bar: BarTruncation,
    alg: AInfAlgebra,
}

impl Shat {
    pub fn new(a: &AInfAlgebra, order: usize) -> Result<Self> {
        Self::with_exec(a, order, Exec::default())
    }

    pub fn with_exec(a: &AInfAlgebra, order: usize, exec: Exec) -> Result<Self> {
        let bar = BarTruncation::with_exec(a, order, exec)?;
        let f = bar.field();
        let labels = (0..bar.dim()).map(|i| {
            let l = if i == 0 {
                "1".to_string()
            } else {
                format!("{}*", bar.space().label(i))
            };
            (l, -bar.space().degree(i))
        });
        let space = GradedSpace::new(labels)?;
        let mut ops = StructureMaps::new();
        // differential: transpose of d_bar with sign −(−1)^{|φ_u|}
        let mut dcols = vec![SparseVec::new(); bar.dim()];
        for (j, col) in bar.d.cols.iter().enumerate() {
            for (u, c) in col.iter() {
                let s = -f.sign(space.degree(u));
                dcols[u].add_term(j, &(c * &s));
            }
        }
        for (u, v) in dcols.into_iter().enumerate() {
            ops.set(vec![u], v);
        }
        for (i, u) in bar.words.iter().enumerate() {
            for (j, v) in bar.words.iter().enumerate() {
                if u.len() + v.len() > order {
                    continue;
                }
                let mut uv = u.clone();
                uv.extend_from_slice(v);
                let k = bar.index[&uv];
                let s = f.sign(space.degree(i) * space.degree(j));
                ops.set(vec![i, j], SparseVec::unit(k, f).scaled(&s));
            }
        }
        let alg = AInfAlgebra::from_parts(f, space, ops, Some(0), true)?;
        Ok(Shat { bar, alg })
    }

    pub fn bar(&self) -> &BarTruncation {
        &self.bar
    }

    /// `Ŝ_N` as a DG algebra.
    pub fn alg(&self) -> &AInfAlgebra {
        &self.alg
    }

    pub fn order(&self) -> usize {
        self.bar.order
    }

    pub fn dim(&self) -> usize {
        self.bar.dim()
    }

    pub fn field(&self) -> Field {
        self.bar.field()
    }

    pub fn weight(&self, i: usize) -> usize {
        self.bar.weight(i)
    }

    /// Index of `φ_{[a]}` for a basis element `a ∈ Ā`.
    pub fn generator(&self, a: usize) -> Option<usize> {
        self.bar.index_of(&[a])
    }

    /// `Ŝ_N` as a local artinian DG algebra with `m` = positive weights.
    pub fn artinian(&self) -> Result<ArtinianDGAlgebra> {
        let layers: Vec<usize> = (0..self.dim()).map(|i| self.weight(i)).collect();
        ArtinianDGAlgebra::trusted(self.alg.clone(), layers, self.order() + 1)
    }

    /// `(φψ)(w) = Σ_{w = w'w''} (−1)^{|ψ||w'|} φ(w')ψ(w'')`, computed
    /// independently of the stored product table.  Inputs must be
    /// homogeneous.
    pub fn convolution_product(&self, phi: &SparseVec, psi: &SparseVec) -> SparseVec {
        let f = self.field();
        let s = self.alg.space();
        let mut out = SparseVec::new();
        let Some(dpsi) = s.vector_degree(psi) else {
            return out;
        };
        for i in 0..self.dim() {
            let mut acc = f.zero();
            for (w1, w2) in self.bar.coproduct(i) {
                let (Some(a), Some(b)) = (phi.get(w1), psi.get(w2)) else { continue };
                let sg = f.sign(dpsi * self.bar.space().degree(w1));
                acc = &acc + &(&(a * b) * &sg);
            }
            out.add_term(i, &acc);
        }
        out
    }

    /// The tower map `Ŝ_N → Ŝ_M` for `M ≤ N`, sending `φ_w` to `φ_w` or 0.
    pub fn tower_map(&self, smaller: &Shat) -> Vec<Option<usize>> {
        self.bar
            .words
            .iter()
            .map(|w| smaller.bar.index_of(w))
            .collect()
    }

    /// Checks that the tower map to `smaller` is a DG algebra map on all
    /// basis elements and pairs.
    pub fn tower_is_dg_map(&self, smaller: &Shat) -> bool {
        let map = self.tower_map(smaller);
        let push = |v: &SparseVec| v.reindexed_partial(|i| map[i]);
        for i in 0..self.dim() {
            let lhs = push(&self.alg.m(&[i]));
            let rhs = match map[i] {
                Some(j) => smaller.alg.m(&[j]),
                None => SparseVec::new(),
            };
            if lhs != rhs {
                return false;
            }
        }
        for (k, v) in self.alg.ops().entries(2) {
            if let (Some(a), Some(b)) = (map[k[0]], map[k[1]]) {
                if push(v) != smaller.alg.m(&[a, b]) {
                    return false;
                }
            }
        }
        true
    }

    /// Cohomology dimensions per degree.
    pub fn cohomology_dims(&self) -> Result<BTreeMap<i64, usize>> {
        Ok(self.alg.m1_complex()?.betti())
    }

    /// Dimensions per (degree, weight) of the cochain spaces.
    pub fn degree_weight_dims(&self) -> BTreeMap<(i64, usize), usize> {
        let mut m = BTreeMap::new();
        for i in 0..self.dim() {
            *m.entry((self.alg.degree(i), self.weight(i))).or_insert(0) += 1;
        }
        m
    }
}

/// Cohomology in one degree with representatives adapted to the weight
/// filtration `F^w = span{φ_u : |u| ≥ w}`: representatives of weight `w`
/// lie in `F^w` and are independent modulo `F^{w+1}` plus coboundaries.
#[derive(Clone, Debug)]
pub struct FilteredCohomology {
    pub degree: i64,
    pub reps: Vec<SparseVec>,
    pub weights: Vec<usize>,
    slice: Vec<usize>,
    boundary_rank: usize,
    cycle_test: LinearMap,
    projector: Solver,
    boundaries: Echelon,
}

impl FilteredCohomology {
    pub fn compute(c: &Complex, degree: i64, weight: impl Fn(usize) -> usize, max_weight: usize) -> Self {
        let f = c.field;
        let slice = c.space.in_degree(degree);
        let di = c.block(degree);
        let boundaries = c.block(degree - 1).image();
        let mut grow = boundaries.clone();
        let mut reps_local: Vec<(SparseVec, usize)> = Vec::new();
        for w in (0..=max_weight).rev() {
            // cocycles supported in weights ≥ w
            let cols: Vec<usize> = (0..slice.len())
                .filter(|&k| weight(slice[k]) >= w)
                .collect();
            let sub = LinearMap::new(f, di.nrows, cols.iter().map(|&k| di.cols[k].clone()).collect());
            for z in sub.kernel() {
                let z = z.reindexed(|k| Some(cols[k])).unwrap();
                if grow.insert(&z) {
                    reps_local.push((z, w));
                }
            }
        }
        reps_local.sort_by_key(|(_, w)| *w);
        let mut cols = boundaries.rows();
        let nb = cols.len();
        cols.extend(reps_local.iter().map(|(v, _)| v.clone()));
        let projector = LinearMap::new(f, slice.len(), cols).solver();
        FilteredCohomology {
            degree,
            reps: reps_local
                .iter()
                .map(|(v, _)| v.reindexed(|k| Some(slice[k])).unwrap())
                .collect(),
            weights: reps_local.iter().map(|(_, w)| *w).collect(),
            slice,
            boundary_rank: nb,
            cycle_test: di,
            projector,
            boundaries,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    fn localize(&self, v: &SparseVec) -> Option<SparseVec> {
        let pos: HashMap<usize, usize> = self.slice.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        v.reindexed(|g| pos.get(&g).copied())
    }

    /// Class coordinates of a cocycle, `None` if not a cocycle here.
    pub fn class_of(&self, v: &SparseVec) -> Option<SparseVec> {
        if v.is_zero() {
            return Some(SparseVec::new());
        }
        let l = self.localize(v)?;
        if !self.cycle_test.apply(&l).is_zero() {
            return None;
        }
        let x = self.projector.solve(&l)?;
        let nb = self.boundary_rank;
        Some(x.filtered(|k| k >= nb).reindexed(|k| Some(k - nb)).unwrap())
    }

    pub fn is_coboundary(&self, v: &SparseVec) -> bool {
        self.localize(v).map(|l| self.boundaries.contains(&l)).unwrap_or(false)
    }

    /// Number of representatives of each weight `0..=max`.
    pub fn weight_dims(&self, max: usize) -> Vec<usize> {
        let mut v = vec![0; max + 1];
        for &w in &self.weights {
            v[w] += 1;
        }
        v
    }

    pub fn boundary_rows_global(&self) -> Vec<SparseVec> {
        self.boundaries
            .rows()
            .into_iter()
            .map(|r| r.reindexed(|k| Some(self.slice[k])).unwrap())
            .collect()
    }
}

/// `H⁰(Ŝ_N)` as an algebra on weight-adapted representatives.
#[derive(Clone, Debug)]
pub struct H0Algebra {
    pub classes: FilteredCohomology,
    /// Product of classes `i, j` in class coordinates.
    pub products: BTreeMap<(usize, usize), SparseVec>,
    pub weight_dims: Vec<usize>,
}

impl H0Algebra {
    pub fn dim(&self) -> usize {
        self.classes.dim()
    }

    /// Indices of the weight-1 classes.
    pub fn generators(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.classes.weights[i] == 1).collect()
    }

    pub fn product(&self, i: usize, j: usize) -> SparseVec {
        self.products.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Whether all commutators of weight-1 classes vanish.
    pub fn generators_commute(&self) -> bool {
        let g = self.generators();
        g.iter().all(|&i| {
            g.iter()
                .all(|&j| self.product(i, j) == self.product(j, i))
        })
    }

    /// Product of class vectors.
    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.add_scaled(&self.product(i, j), &(a * b));
            }
        }
        out
    }
}

/// Cohomology of `Ŝ_N` with the `H⁰` algebra.
#[derive(Clone, Debug)]
pub struct ShatCohomology {
    pub order: usize,
    pub dims: BTreeMap<i64, usize>,
    pub h0: H0Algebra,
    pub degree_weight_dims: BTreeMap<(i64, usize), usize>,
}

pub fn s_hat_cohomology(a: &AInfAlgebra, order: usize) -> Result<ShatCohomology> {
    let s = Shat::new(a, order)?;
    s_hat_cohomology_of(&s)
}

pub fn s_hat_cohomology_of(s: &Shat) -> Result<ShatCohomology> {
    let c = s.alg().m1_complex()?;
    let dims = c.betti();
    let h0 = h0_algebra(s, &c)?;
    Ok(ShatCohomology {
        order: s.order(),
        dims,
        h0,
        degree_weight_dims: s.degree_weight_dims(),
    })
}

pub(crate) fn h0_algebra(s: &Shat, c: &Complex) -> Result<H0Algebra> {
    let classes = FilteredCohomology::compute(c, 0, |i| s.weight(i), s.order());
    let alg = s.alg();
    let mut products = BTreeMap::new();
    for (i, ri) in classes.reps.iter().enumerate() {
        for (j, rj) in classes.reps.iter().enumerate() {
            let p = alg.m_vec(&[ri, rj]);
            let cl = classes.class_of(&p).ok_or_else(|| {
                Error::Structural("product of degree-0 cocycles is not a cocycle".into())
            })?;
            if !cl.is_zero() {
                products.insert((i, j), cl);
            }
        }
    }
    for b in classes.boundary_rows_global() {
        for r in &classes.reps {
            for p in [alg.m_vec(&[&b, r]), alg.m_vec(&[r, &b])] {
                if !classes.is_coboundary(&p) && !p.is_zero() {
                    return Err(Error::Structural(
                        "coboundaries do not act trivially on H⁰".into(),
                    ));
                }
            }
        }
    }
    let weight_dims = classes.weight_dims(s.order());
    Ok(H0Algebra {
        classes,
        products,
        weight_dims,
    })
}

/// Outcome of the Koszulness probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KoszulVerdict {
    /// `Hⁱ = 0` for every `i ≠ 0` in the window, after stabilization.
    KoszulAtOrder(usize),
    FailsAt { degree: i64, order: usize },
}

/// A truncation-level certificate: the stable part of `Hⁱ(Ŝ_N)` is the
/// image of `Hⁱ(Ŝ_{N+2}) → Hⁱ(Ŝ_N)`, which discards classes created by
/// cutting off words of weight `> N`.
#[derive(Clone, Debug)]
pub struct KoszulProbe {
    pub order: usize,
    pub window: (i64, i64),
    pub raw: BTreeMap<i64, usize>,
    pub raw_next: BTreeMap<i64, usize>,
    pub stable: BTreeMap<i64, usize>,
    pub verdict: KoszulVerdict,
}

pub const KOSZUL_STABILIZATION: usize = 2;

pub fn koszul_probe(a: &AInfAlgebra, order: usize, window: Option<(i64, i64)>) -> Result<KoszulProbe> {
    if !is_admissible(a) {
        return Err(Error::Hypothesis(
            "Koszul probe needs an admissible algebra (Ā in degrees ≥ 1, A⁰ = k)".into(),
        ));
    }
    let small = Shat::new(a, order)?;
    let big = Shat::new(a, order + KOSZUL_STABILIZATION)?;
    let next = Shat::new(a, order + 1)?;
    let cs = small.alg().m1_complex()?;
    let cb = big.alg().m1_complex()?;
    let raw = cs.betti();
    let raw_next = next.alg().m1_complex()?.betti();
    let window = window.unwrap_or_else(|| small.alg().space().support().unwrap_or((0, 0)));
    let map = big.tower_map(&small);
    let mut stable = BTreeMap::new();
    let mut verdict = KoszulVerdict::KoszulAtOrder(order);
    for i in window.0..=window.1 {
        let hs = cs.cohomology(i);
        let hb = cb.cohomology(i);
        let cols: Vec<SparseVec> = hb
            .reps
            .iter()
            .map(|r| {
                let v = r.reindexed_partial(|k| map[k]);
                hs.class_of(&v).expect("tower map is a chain map")
            })
            .collect();
        let rank = LinearMap::new(a.field(), hs.dim(), cols).rank();
        stable.insert(i, rank);
        if i != 0 && rank != 0 && verdict == KoszulVerdict::KoszulAtOrder(order) {
            verdict = KoszulVerdict::FailsAt { degree: i, order };
        }
    }
    Ok(KoszulProbe {
        order,
        window,
        raw,
        raw_next,
        stable,
        verdict,
    })
}

/// `τ_A = Σ_a a⊗φ_{[a]} ∈ A⊗Ŝ_N`, the universal twisting cochain viewed
/// as an element of the tensor algebra (basis `tensor_index(a, w)`).
pub fn universal_twisting_cochain(a: &AInfAlgebra, s: &Shat) -> Result<SparseVec> {
    let f = a.field();
    let mut tau = SparseVec::new();
    for l in a.augmentation_ideal()? {
        let w = s.generator(l).ok_or_else(|| Error::OutOfRange("Ŝ_0 has no generators".into()))?;
        tau.add_term(tensor_index(l, w, s.dim()), &f.one());
    }
    Ok(tau)
}

/// The evaluation `τ_A(w)` on a bar word: `a` for `w = [sa]`, else 0.
pub fn tau_on_word(a: &AInfAlgebra, w: &[usize]) -> SparseVec {
    if w.len() == 1 {
        SparseVec::unit(w[0], a.field())
    } else {
        SparseVec::new()
    }
}

/// `Σ (−1)^{n(n+1)/2} m_n(τ,…,τ)` in `A⊗Ŝ_N`; zero iff `τ_A` is a twisting
/// cochain on the truncation.
pub fn twisting_cochain_residual(a: &AInfAlgebra, s: &Shat) -> Result<SparseVec> {
    let t = tensor_with_dg(a, s.alg())?;
    let tau = universal_twisting_cochain(a, s)?;
    Ok(crate::mc::mc_sum(&t, &tau, s.order()))
}

/// The weight-truncated `BĀ⊗_{τ_A}A`: basis `[w]⊗a` with weight
/// `|w| + [a ∈ Ā] ≤ N` and differential the coderivation extension of `b`
/// on the full word `[w|sa]`.
#[derive(Clone, Debug)]
pub struct BarComplex {
    pub order: usize,
    pub basis: Vec<(Vec<usize>, usize)>,
    pub complex: Complex,
    index: HashMap<(Vec<usize>, usize), usize>,
}

pub fn bar_complex(a: &AInfAlgebra, order: usize) -> Result<BarComplex> {
    let letters = a.augmentation_ideal()?;
    let u = a.unit().unwrap();
    let words = generate_words(&letters, order);
    let mut basis = Vec::new();
    for w in &words {
        for x in 0..a.dim() {
            let weight = w.len() + usize::from(x != u);
            if weight <= order {
                basis.push((w.clone(), x));
            }
        }
    }
    let index: HashMap<(Vec<usize>, usize), usize> =
        basis.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
    let space = GradedSpace::new(basis.iter().map(|(w, x)| {
        let mut full = w.clone();
        full.push(*x);
        (
            format!("{}⊗{}", word_label(a, w), a.label(*x)),
            full.iter().map(|&i| a.degree(i) - 1).sum::<i64>(),
        )
    }))?;
    let b = a.b_from_m();
    let cols: Vec<SparseVec> = Exec::default().map(&basis, |(w, x)| {
        let mut full = w.clone();
        full.push(*x);
        let mut v = SparseVec::new();
        coderivation(a, &b, &full, |mut w2, c| {
            let last = w2.pop().unwrap();
            // subwords avoiding the last letter produce Ā letters; any
            // output of a block ending at the module letter is allowed
            let j = index
                .get(&(w2, last))
                .copied()
                .expect("bar complex truncation is a subcomplex");
            v.add_term(j, &c);
        });
        v
    });
    let d = LinearMap::new(a.field(), basis.len(), cols);
    let complex = Complex::new(a.field(), space, d)?;
    Ok(BarComplex {
        order,
        basis,
        complex,
        index,
    })
}

impl BarComplex {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, w: &[usize], x: usize) -> Option<usize> {
        self.index.get(&(w.to_vec(), x)).copied()
    }

    /// The slice `[ ]⊗A`, the kernel of the generator actions of `Ŝ`; as a
    /// complex it is `A` shifted, with differential `b₁`.
    pub fn hom_from_k(&self) -> Result<Complex> {
        let idx: Vec<usize> = (0..self.dim()).filter(|&i| self.basis[i].0.is_empty()).collect();
        let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let space = GradedSpace::new(idx.iter().map(|&i| {
            (
                self.complex.space.label(i).to_string(),
                self.complex.space.degree(i),
            )
        }))?;
        let cols = idx
            .iter()
            .map(|&i| {
                self.complex.d.cols[i]
                    .reindexed(|g| pos.get(&g).copied())
                    .ok_or_else(|| Error::Structural("[ ]⊗A is not a subcomplex".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let f = self.complex.field;
        Complex::new(f, space, LinearMap::new(f, idx.len(), cols))
    }

    /// Whether the truncated complex has cohomology `k`, spanned by `[ ]⊗1`.
    pub fn is_resolution_of_k(&self, unit: usize) -> bool {
        let betti = self.complex.betti();
        if betti.values().sum::<usize>() != 1 {
            return false;
        }
        let Some(i) = self.index_of(&[], unit) else { return false };
        let h = self.complex.cohomology(self.complex.space.degree(i));
        let v = SparseVec::unit(i, self.complex.field);
        h.is_cocycle(&v) && !h.is_coboundary(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::builtins::{kpoints, massey, njac, xy};
    use crate::graded::GradedSpace;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn ground_field_has_trivial_bar() {
        let k = njac(Field::Rational, 0).unwrap();
        let s = Shat::new(&k, 3).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.bar().space().label(0), "[]");
        assert_eq!(s.alg().label(0), "1");
    }

    #[test]
    fn njac_two_at_order_two() {
        let a = njac(Field::Rational, 2).unwrap();
        let b = BarTruncation::new(&a, 2).unwrap();
        assert_eq!(b.dim(), 7);
        assert!(b.differential().is_zero());
        assert_eq!(b.weight_slice_dims(), vec![1, 2, 4]);
        assert_eq!(b.space().label(3), "[x1|x1]");
    }

    #[test]
    fn exterior_bar_squares_to_zero() {
        for f in [Field::Rational, f2(), Field::prime(3).unwrap()] {
            let a = kpoints(f, 2).unwrap();
            let b = BarTruncation::new(&a, 4).unwrap();
            assert!(b.d_squared_failure().is_none());
            assert!(b.respects_weight());
            assert!(b.complex().is_ok());
        }
    }

    #[test]
    fn deconcatenation_is_coassociative() {
        let a = kpoints(Field::Rational, 2).unwrap();
        let b = BarTruncation::new(&a, 3).unwrap();
        for i in 0..b.dim() {
            let mut left: Vec<(usize, usize, usize)> = Vec::new();
            let mut right = Vec::new();
            for (x, y) in b.coproduct(i) {
                for (u, v) in b.coproduct(x) {
                    left.push((u, v, y));
                }
                for (u, v) in b.coproduct(y) {
                    right.push((x, u, v));
                }
            }
            left.sort();
            right.sort();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn exterior_h0_is_power_series() {
        let a = kpoints(Field::Rational, 2).unwrap();
        let c = s_hat_cohomology(&a, 4).unwrap();
        assert_eq!(c.h0.weight_dims, vec![1, 2, 3, 4, 5]);
        assert!(c.h0.generators_commute());
        let c3 = s_hat_cohomology(&a, 3).unwrap();
        assert_eq!(c3.h0.dim(), 10);
    }

    #[test]
    fn njac_h0_is_free() {
        let a = njac(Field::Rational, 2).unwrap();
        let c = s_hat_cohomology(&a, 3).unwrap();
        assert_eq!(c.h0.weight_dims, vec![1, 2, 4, 8]);
        assert!(!c.h0.generators_commute());
    }

    #[test]
    fn one_point_dual_is_truncated_polynomial() {
        let a = kpoints(Field::Rational, 1).unwrap();
        let s = Shat::new(&a, 3).unwrap();
        assert_eq!(s.dim(), 4);
        let r = s.artinian().unwrap();
        assert_eq!(r.nilpotency_index(), 4);
        assert!(r.is_commutative());
        assert!(s.alg().m1_map().is_zero());
        let t = SparseVec::unit(s.generator(1).unwrap(), Field::Rational);
        let t2 = s.alg().m_vec(&[&t, &t]);
        let t3 = s.alg().m_vec(&[&t2, &t]);
        assert_eq!(t3, SparseVec::unit(3, Field::Rational));
        assert!(s.alg().m_vec(&[&t3, &t]).is_zero());
        let checked = ArtinianDGAlgebra::new(s.alg().clone()).unwrap();
        assert_eq!(checked.nilpotency_index(), 4);
    }

    #[test]
    fn dual_is_a_dg_algebra_and_convolution_agrees() {
        for (a, n) in [
            (kpoints(Field::Rational, 2).unwrap(), 3),
            (xy(Field::Rational).unwrap(), 3),
            (massey(Field::Rational).unwrap(), 2),
        ] {
            let s = Shat::new(&a, n).unwrap();
            assert!(s.alg().check_axioms(3).unwrap().passed());
            let f = Field::Rational;
            for i in 0..s.dim() {
                for j in 0..s.dim() {
                    let (u, v) = (SparseVec::unit(i, f), SparseVec::unit(j, f));
                    assert_eq!(s.convolution_product(&u, &v), s.alg().m_vec(&[&u, &v]));
                }
            }
        }
    }

    #[test]
    fn tower_maps_are_dg_maps() {
        let a = kpoints(Field::Rational, 2).unwrap();
        let s4 = Shat::new(&a, 4).unwrap();
        let s3 = Shat::new(&a, 3).unwrap();
        assert!(s4.tower_is_dg_map(&s3));
        let m = massey(Field::Rational).unwrap();
        assert!(Shat::new(&m, 3).unwrap().tower_is_dg_map(&Shat::new(&m, 2).unwrap()));
    }

    #[test]
    fn universal_twisting_cochain_is_maurer_cartan() {
        for a in [
            kpoints(Field::Rational, 2).unwrap(),
            njac(Field::Rational, 2).unwrap(),
            xy(Field::Rational).unwrap(),
            massey(Field::Rational).unwrap(),
            kpoints(f2(), 2).unwrap(),
        ] {
            for n in 1..=3 {
                let s = Shat::new(&a, n).unwrap();
                assert!(twisting_cochain_residual(&a, &s).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn koszul_probe_verdicts() {
        let a = kpoints(Field::Rational, 2).unwrap();
        let p = koszul_probe(&a, 3, None).unwrap();
        assert_eq!(p.verdict, KoszulVerdict::KoszulAtOrder(3));
        let n = njac(Field::Rational, 2).unwrap();
        assert_eq!(
            koszul_probe(&n, 3, None).unwrap().verdict,
            KoszulVerdict::KoszulAtOrder(3)
        );
    }

    #[test]
    fn koszul_probe_refuses_non_admissible() {
        let a = crate::ainfty::AlgebraBuilder::new(
            Field::Rational,
            GradedSpace::from_strs(&[("1", 0), ("e", 0)]).unwrap(),
        )
        .unit_with_laws("1")
        .unwrap()
        .augmented()
        .build()
        .unwrap();
        assert!(matches!(koszul_probe(&a, 2, None), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn one_point_bar_complex_resolves_k() {
        let a = kpoints(Field::Rational, 1).unwrap();
        for n in 1..=5 {
            let c = bar_complex(&a, n).unwrap();
            assert!(c.is_resolution_of_k(a.unit().unwrap()), "order {n}");
            let h = c.hom_from_k().unwrap();
            assert_eq!(h.space.dim(), a.dim());
            assert!(h.d.is_zero());
        }
    }

    #[test]
    fn exterior_bar_complex_resolves_k() {
        let a = kpoints(Field::Rational, 2).unwrap();
        let c = bar_complex(&a, 3).unwrap();
        assert!(c.is_resolution_of_k(a.unit().unwrap()));
    }
}
