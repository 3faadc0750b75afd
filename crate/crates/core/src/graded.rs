//! Graded vector spaces with named bases, finite cochain complexes and
//! their cohomology.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Echelon, LinearMap, Solver, SparseVec};

/// A finite-dimensional ℤ-graded space with an ordered, labelled basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    labels: Vec<String>,
    degrees: Vec<i64>,
    index: HashMap<String, usize>,
}

impl GradedSpace {
    pub fn new(basis: impl IntoIterator<Item = (String, i64)>) -> Result<Self> {
        let mut labels = Vec::new();
        let mut degrees = Vec::new();
        let mut index = HashMap::new();
        for (l, d) in basis {
            if index.insert(l.clone(), labels.len()).is_some() {
                return Err(Error::Structural(format!("duplicate basis label `{l}`")));
            }
            labels.push(l);
            degrees.push(d);
        }
        Ok(GradedSpace {
            labels,
            degrees,
            index,
        })
    }

    pub fn from_strs(basis: &[(&str, i64)]) -> Result<Self> {
        Self::new(basis.iter().map(|(l, d)| (l.to_string(), *d)))
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn try_index(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::Parse(format!("unknown basis label `{label}`")))
    }

    /// Indices of the basis elements of degree `d`, in basis order.
    pub fn in_degree(&self, d: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == d).collect()
    }

    /// `[d_min, d_max]`, or `None` for the zero space.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = self.degrees.iter().min()?;
        let hi = self.degrees.iter().max()?;
        Some((*lo, *hi))
    }

    /// Dimension of every nonzero degree slice.
    pub fn slice_dims(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for d in &self.degrees {
            *m.entry(*d).or_insert(0) += 1;
        }
        m
    }

    /// Degree of a homogeneous vector; `None` for zero or inhomogeneous.
    pub fn vector_degree(&self, v: &SparseVec) -> Option<i64> {
        let mut it = v.indices().map(|i| self.degrees[i]);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous_of(&self, v: &SparseVec, d: i64) -> bool {
        v.indices().all(|i| self.degrees[i] == d)
    }

    /// Human-readable rendering `c·label + …`.
    pub fn render(&self, v: &SparseVec) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.iter()
            .map(|(i, c)| format!("{}*{}", c.to_decimal(), self.labels[i]))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A finite cochain complex: a graded space with a degree +1 square-zero
/// endomorphism.
#[derive(Clone, Debug)]
pub struct Complex {
    pub field: Field,
    pub space: GradedSpace,
    pub d: LinearMap,
}

impl Complex {
    /// Validates degree and `d∘d = 0` before accepting.
    pub fn new(field: Field, space: GradedSpace, d: LinearMap) -> Result<Self> {
        if d.nrows != space.dim() || d.ncols() != space.dim() {
            return Err(Error::Structural("differential has wrong shape".into()));
        }
        for (j, col) in d.cols.iter().enumerate() {
            if !space.is_homogeneous_of(col, space.degree(j) + 1) {
                return Err(Error::Structural(format!(
                    "differential of `{}` is not of degree +1",
                    space.label(j)
                )));
            }
        }
        for (j, col) in d.cols.iter().enumerate() {
            if !d.apply(col).is_zero() {
                return Err(Error::Structural(format!(
                    "d² ≠ 0 on `{}`",
                    space.label(j)
                )));
            }
        }
        Ok(Complex { field, space, d })
    }

    /// Restriction of `d` to degree `i`, as a map `Cⁱ → Cⁱ⁺¹` in local
    /// slice coordinates.
    pub fn block(&self, i: i64) -> LinearMap {
        let src = self.space.in_degree(i);
        let dst = self.space.in_degree(i + 1);
        let pos: HashMap<usize, usize> = dst.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        LinearMap::new(
            self.field,
            dst.len(),
            src.iter()
                .map(|&j| {
                    self.d.cols[j]
                        .reindexed(|g| pos.get(&g).copied())
                        .expect("degree checked on construction")
                })
                .collect(),
        )
    }

    pub fn cohomology(&self, i: i64) -> Cohomology {
        Cohomology::compute(self, i, &[])
    }

    /// `Hⁱ` whose representatives start with those `preferred` global
    /// cocycles that are independent modulo coboundaries.
    pub fn cohomology_preferring(&self, i: i64, preferred: &[SparseVec]) -> Cohomology {
        Cohomology::compute(self, i, preferred)
    }

    /// `dim Hⁱ` for every degree of the support.
    pub fn betti(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        if let Some((lo, hi)) = self.space.support() {
            for i in lo..=hi {
                m.insert(i, self.cohomology(i).dim());
            }
        }
        m
    }
}

/// `Hⁱ` of a complex: representatives and a projection onto classes.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: i64,
    slice: Vec<usize>,
    /// Representative cocycles in global coordinates.
    pub reps: Vec<SparseVec>,
    cocycle_dim: usize,
    boundary_dim: usize,
    cycle_test: LinearMap,
    boundaries: Echelon,
    projector: Solver,
}

impl Cohomology {
    fn compute(c: &Complex, i: i64, preferred: &[SparseVec]) -> Cohomology {
        let slice = c.space.in_degree(i);
        let di = c.block(i);
        let dprev = c.block(i - 1);
        let pos: HashMap<usize, usize> = slice.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let mut z: Vec<SparseVec> = preferred
            .iter()
            .filter_map(|v| v.reindexed(|g| pos.get(&g).copied()))
            .filter(|l| di.apply(l).is_zero())
            .collect();
        z.extend(di.kernel());
        let boundaries = dprev.image();
        let mut grow = boundaries.clone();
        let mut local_reps = Vec::new();
        for v in &z {
            if grow.insert(v) {
                local_reps.push(v.clone());
            }
        }
        let mut cols: Vec<SparseVec> = boundaries.rows();
        let nb = cols.len();
        cols.extend(local_reps.iter().cloned());
        let projector = LinearMap::new(c.field, slice.len(), cols).solver();
        let reps = local_reps
            .iter()
            .map(|v| v.reindexed(|k| Some(slice[k])).unwrap())
            .collect();
        Cohomology {
            degree: i,
            slice,
            reps,
            cocycle_dim: di.ncols() - di.rank(),
            boundary_dim: nb,
            cycle_test: di,
            boundaries,
            projector,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn cocycle_dim(&self) -> usize {
        self.cocycle_dim
    }

    pub fn boundary_dim(&self) -> usize {
        self.boundary_dim
    }

    fn localize(&self, v: &SparseVec) -> Option<SparseVec> {
        let pos: HashMap<usize, usize> =
            self.slice.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        v.reindexed(|g| pos.get(&g).copied())
    }

    /// Whether a global vector is a cocycle of this degree.
    pub fn is_cocycle(&self, v: &SparseVec) -> bool {
        match self.localize(v) {
            Some(l) => self.cycle_test.apply(&l).is_zero(),
            None => false,
        }
    }

    pub fn is_coboundary(&self, v: &SparseVec) -> bool {
        self.localize(v)
            .map(|l| self.boundaries.contains(&l))
            .unwrap_or(false)
    }

    /// Coordinates of the class of a cocycle in the representative basis;
    /// `None` if `v` is not a cocycle of this degree.
    pub fn class_of(&self, v: &SparseVec) -> Option<SparseVec> {
        let l = self.localize(v)?;
        if !self.cycle_test.apply(&l).is_zero() {
            return None;
        }
        let x = self.projector.solve(&l)?;
        let nb = self.boundary_dim;
        Some(x.filtered(|k| k >= nb).reindexed(|k| Some(k - nb)).unwrap())
    }

    /// Maps class coordinates back to a representative cocycle.
    pub fn representative(&self, coords: &SparseVec) -> SparseVec {
        let mut v = SparseVec::new();
        for (k, c) in coords.iter() {
            v.add_scaled(&self.reps[k], c);
        }
        v
    }

    /// Canonical normal form of a cocycle modulo coboundaries, in global
    /// coordinates.
    pub fn normal_form(&self, v: &SparseVec) -> Option<SparseVec> {
        let l = self.localize(v)?;
        Some(
            self.boundaries
                .reduce(&l)
                .reindexed(|k| Some(self.slice[k]))
                .unwrap(),
        )
    }
}
