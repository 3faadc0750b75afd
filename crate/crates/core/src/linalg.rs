//! Sparse exact linear algebra.
//!
//! Vectors are sparse maps from coordinate index to a nonzero [`Scalar`].
//! Row reduction is incremental: an [`Echelon`] holds a reduced row
//! echelon basis of a subspace and supports membership tests, normal
//! forms modulo the subspace and insertion.  Over ℚ elimination runs on
//! primitive integer rows (fraction-free, content removed after every
//! combination) and converts back to rationals only when a result is
//! read out.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{mul_mod, Field, Scalar};

/// A sparse vector with canonical (sorted) coordinate order.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: BTreeMap<usize, Scalar>,
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(k, v)| (k, v.to_decimal())))
            .finish()
    }
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(i: usize, field: Field) -> Self {
        let mut v = Self::new();
        v.entries.insert(i, field.one());
        v
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut v = Self::new();
        for (i, c) in pairs {
            v.add_term(i, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries.get(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    /// Field of the entries, `None` for the zero vector.
    pub fn field(&self) -> Option<Field> {
        self.entries.values().next().map(Scalar::field)
    }

    /// Adds `c·e_i`, dropping the entry when it cancels.
    pub fn add_term(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&i) {
            Some(x) => {
                let s = &*x + c;
                if s.is_zero() {
                    self.entries.remove(&i);
                } else {
                    *x = s;
                }
            }
            None => {
                self.entries.insert(i, c.clone());
            }
        }
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, other: &SparseVec, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_term(i, &(x * c));
        }
    }

    pub fn add(&mut self, other: &SparseVec) {
        for (i, x) in other.iter() {
            self.add_term(i, x);
        }
    }

    pub fn sub(&mut self, other: &SparseVec) {
        for (i, x) in other.iter() {
            self.add_term(i, &-x);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, -x)).collect(),
        }
    }

    pub fn difference(&self, other: &SparseVec) -> SparseVec {
        let mut v = self.clone();
        v.sub(other);
        v
    }

    pub fn sum(&self, other: &SparseVec) -> SparseVec {
        let mut v = self.clone();
        v.add(other);
        v
    }

    /// Dot product with another sparse vector.
    pub fn dot(&self, other: &SparseVec, field: Field) -> Scalar {
        let mut acc = field.zero();
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (i, x) in small.iter() {
            if let Some(y) = big.get(i) {
                acc = &acc + &(x * y);
            }
        }
        acc
    }

    /// Keeps only the coordinates satisfying the predicate.
    pub fn filtered(&self, keep: impl Fn(usize) -> bool) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| keep(**i))
                .map(|(i, c)| (*i, c.clone()))
                .collect(),
        }
    }

    /// Re-indexes coordinates through a partial map; unmapped coordinates
    /// must be zero, otherwise `None` is returned.
    pub fn reindexed(&self, map: impl Fn(usize) -> Option<usize>) -> Option<SparseVec> {
        let mut v = SparseVec::new();
        for (i, c) in self.iter() {
            v.add_term(map(i)?, c);
        }
        Some(v)
    }

    /// Re-indexes through a partial map, dropping unmapped coordinates.
    pub fn reindexed_partial(&self, map: impl Fn(usize) -> Option<usize>) -> SparseVec {
        let mut v = SparseVec::new();
        for (i, c) in self.iter() {
            if let Some(j) = map(i) {
                v.add_term(j, c);
            }
        }
        v
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.iter().next().map(|(i, c)| (*i, c))
    }

    /// Dense coordinates of length `n`.
    pub fn to_dense(&self, n: usize, field: Field) -> Vec<Scalar> {
        let mut d = vec![field.zero(); n];
        for (i, c) in self.iter() {
            d[i] = c.clone();
        }
        d
    }

    pub fn from_dense(d: &[Scalar]) -> SparseVec {
        SparseVec::from_pairs(d.iter().cloned().enumerate())
    }
}

// ---------------------------------------------------------------------------
// Elimination domains

type IntRow = Vec<(usize, BigInt)>;
type ModRow = Vec<(usize, u64)>;

#[derive(Clone, Debug)]
enum Store {
    Q(Vec<IntRow>),
    P(u64, Vec<ModRow>),
}

fn int_row(v: &SparseVec) -> (IntRow, BigInt) {
    // Returns (w, λ) with w = λ·v an integer row.
    let mut lcm = BigInt::one();
    for (_, c) in v.iter() {
        lcm = lcm.lcm(c.as_rational().denom());
    }
    let row = v
        .iter()
        .map(|(i, c)| {
            let r = c.as_rational();
            (i, r.numer() * (&lcm / r.denom()))
        })
        .collect();
    (row, lcm)
}

fn mod_row(v: &SparseVec) -> ModRow {
    v.iter().map(|(i, c)| (i, c.as_residue())).collect()
}

/// `a·w − b·p` on sorted integer rows.
fn combine_int(a: &BigInt, w: &IntRow, b: &BigInt, p: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(w.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < w.len() || j < p.len() {
        let take_w = j >= p.len() || (i < w.len() && w[i].0 < p[j].0);
        let take_p = i >= w.len() || (j < p.len() && p[j].0 < w[i].0);
        if take_w {
            out.push((w[i].0, a * &w[i].1));
            i += 1;
        } else if take_p {
            out.push((p[j].0, -(b * &p[j].1)));
            j += 1;
        } else {
            let x = a * &w[i].1 - b * &p[j].1;
            if !x.is_zero() {
                out.push((w[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// `w − b·p` on sorted residue rows.
fn combine_mod(w: &ModRow, b: u64, p: &ModRow, q: u64) -> ModRow {
    let nb = (q - b % q) % q;
    let mut out = Vec::with_capacity(w.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < w.len() || j < p.len() {
        let take_w = j >= p.len() || (i < w.len() && w[i].0 < p[j].0);
        let take_p = i >= w.len() || (j < p.len() && p[j].0 < w[i].0);
        if take_w {
            out.push(w[i]);
            i += 1;
        } else if take_p {
            out.push((p[j].0, mul_mod(nb, p[j].1, q)));
            j += 1;
        } else {
            let x = (w[i].1 + mul_mod(nb, p[j].1, q)) % q;
            if x != 0 {
                out.push((w[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn content(row: &IntRow) -> BigInt {
    let mut g = BigInt::zero();
    for (_, x) in row {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

fn make_primitive(row: &mut IntRow) {
    let mut g = content(row);
    if g.is_zero() {
        return;
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

fn lookup<E>(row: &[(usize, E)], col: usize) -> Option<&E> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|k| &row[k].1)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::field::pow_mod(a, p - 2, p)
}

/// Reduced row echelon basis of a subspace of `field^ncols`.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    ncols: usize,
    store: Store,
    pivots: Vec<usize>,
    row_of_pivot: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(field: Field, ncols: usize) -> Self {
        let store = match field {
            Field::Rational => Store::Q(Vec::new()),
            Field::Prime(p) => Store::P(p, Vec::new()),
        };
        Echelon {
            field,
            ncols,
            store,
            pivots: Vec::new(),
            row_of_pivot: BTreeMap::new(),
        }
    }

    pub fn from_vectors<'a>(
        field: Field,
        ncols: usize,
        vs: impl IntoIterator<Item = &'a SparseVec>,
    ) -> Self {
        let mut e = Echelon::new(field, ncols);
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Pivot columns in insertion order (row order of [`Self::rows`]).
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.row_of_pivot.contains_key(&col)
    }

    /// Normal form of `v` modulo the subspace: the unique representative
    /// of `v + span` with zero entries in every pivot column.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        match &self.store {
            Store::Q(rows) => {
                if v.is_zero() {
                    return SparseVec::new();
                }
                let (mut w, mut lam) = int_row(v);
                loop {
                    let hit = w
                        .iter()
                        .find_map(|(c, x)| self.row_of_pivot.get(c).map(|&r| (r, x.clone())));
                    let Some((r, b)) = hit else { break };
                    let p = &rows[r];
                    let a = lookup(p, self.pivots[r]).expect("pivot present").clone();
                    w = combine_int(&a, &w, &b, p);
                    lam *= &a;
                    let g = content(&w).gcd(&lam);
                    if !g.is_one() && !g.is_zero() {
                        for (_, x) in w.iter_mut() {
                            *x = &*x / &g;
                        }
                        lam = &lam / &g;
                    }
                }
                SparseVec::from_pairs(w.into_iter().map(|(i, x)| {
                    (i, Scalar::Rational(BigRational::new(x, lam.clone())))
                }))
            }
            Store::P(q, rows) => {
                let mut w = mod_row(v);
                loop {
                    let hit = w
                        .iter()
                        .find_map(|(c, x)| self.row_of_pivot.get(c).map(|&r| (r, *x)));
                    let Some((r, b)) = hit else { break };
                    w = combine_mod(&w, b, &rows[r], *q);
                }
                SparseVec::from_pairs(
                    w.into_iter()
                        .map(|(i, x)| (i, Scalar::Prime { value: x, modulus: *q })),
                )
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts a vector; returns `true` if it enlarged the subspace.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((col, _)) = r.leading() else {
            return false;
        };
        debug_assert!(col < self.ncols, "vector exceeds column count");
        match &mut self.store {
            Store::Q(rows) => {
                let (mut w, _) = int_row(&r);
                make_primitive(&mut w);
                let a = lookup(&w, col).unwrap().clone();
                for row in rows.iter_mut() {
                    if let Some(b) = lookup(row, col).cloned() {
                        let mut nr = combine_int(&a, row, &b, &w);
                        make_primitive(&mut nr);
                        *row = nr;
                    }
                }
                rows.push(w);
            }
            Store::P(q, rows) => {
                let mut w = mod_row(&r);
                let inv = inv_mod(lookup(&w, col).copied().unwrap(), *q);
                for (_, x) in w.iter_mut() {
                    *x = mul_mod(*x, inv, *q);
                }
                for row in rows.iter_mut() {
                    if let Some(b) = lookup(row, col).copied() {
                        *row = combine_mod(row, b, &w, *q);
                    }
                }
                rows.push(w);
            }
        }
        self.row_of_pivot.insert(col, self.pivots.len());
        self.pivots.push(col);
        true
    }

    /// Basis rows, each normalized to have pivot entry 1.
    pub fn rows(&self) -> Vec<SparseVec> {
        match &self.store {
            Store::Q(rows) => rows
                .iter()
                .zip(&self.pivots)
                .map(|(row, &pc)| {
                    let a = lookup(row, pc).unwrap().clone();
                    SparseVec::from_pairs(row.iter().map(|(i, x)| {
                        (*i, Scalar::Rational(BigRational::new(x.clone(), a.clone())))
                    }))
                })
                .collect(),
            Store::P(q, rows) => rows
                .iter()
                .map(|row| {
                    SparseVec::from_pairs(
                        row.iter()
                            .map(|(i, x)| (*i, Scalar::Prime { value: *x, modulus: *q })),
                    )
                })
                .collect(),
        }
    }

    /// Rows sorted by pivot column, the canonical RREF presentation.
    pub fn sorted_rows(&self) -> Vec<(usize, SparseVec)> {
        let rows = self.rows();
        self.row_of_pivot
            .iter()
            .map(|(&c, &r)| (c, rows[r].clone()))
            .collect()
    }

    /// Basis of the null space of the matrix whose rows span this
    /// subspace: one vector per free column.
    pub fn null_space(&self) -> Vec<SparseVec> {
        let sorted = self.sorted_rows();
        (0..self.ncols)
            .filter(|c| !self.is_pivot(*c))
            .map(|f| {
                let mut x = SparseVec::unit(f, self.field);
                for (pc, row) in &sorted {
                    if let Some(v) = row.get(f) {
                        x.add_term(*pc, &-v);
                    }
                }
                x
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Linear maps

/// A linear map `field^ncols → field^nrows` stored by columns.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    pub field: Field,
    pub nrows: usize,
    pub cols: Vec<SparseVec>,
}

impl LinearMap {
    pub fn new(field: Field, nrows: usize, cols: Vec<SparseVec>) -> Self {
        LinearMap { field, nrows, cols }
    }

    pub fn zero(field: Field, nrows: usize, ncols: usize) -> Self {
        LinearMap {
            field,
            nrows,
            cols: vec![SparseVec::new(); ncols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        LinearMap {
            field,
            nrows: n,
            cols: (0..n).map(|i| SparseVec::unit(i, field)).collect(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut y = SparseVec::new();
        for (j, c) in x.iter() {
            y.add_scaled(&self.cols[j], c);
        }
        y
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            field: self.field,
            nrows: self.nrows,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn transpose(&self) -> LinearMap {
        let mut rows = vec![SparseVec::new(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col.iter() {
                rows[i].add_term(j, c);
            }
        }
        LinearMap {
            field: self.field,
            nrows: self.ncols(),
            cols: rows,
        }
    }

    /// Row-space echelon of the matrix (rows live in `field^ncols`).
    pub fn row_echelon(&self) -> Echelon {
        let t = self.transpose();
        Echelon::from_vectors(self.field, self.ncols(), t.cols.iter())
    }

    pub fn rank(&self) -> usize {
        self.image().rank()
    }

    /// Echelon basis of the image.
    pub fn image(&self) -> Echelon {
        Echelon::from_vectors(self.field, self.nrows, self.cols.iter())
    }

    pub fn kernel(&self) -> Vec<SparseVec> {
        self.row_echelon().null_space()
    }

    /// Prepares repeated solves of `self·x = b`.
    pub fn solver(&self) -> Solver {
        Solver::new(self)
    }

    pub fn to_matrix(&self) -> SparseMatrix {
        let mut t = Vec::new();
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col.iter() {
                t.push((i, j, c.clone()));
            }
        }
        SparseMatrix::from_triplets(self.field, self.nrows, self.ncols(), t)
    }
}

/// Factorization of a linear map for repeated solves.
///
/// Internally the columns are augmented with identity tags so that one
/// elimination yields image, kernel and particular solutions at once.
#[derive(Clone, Debug)]
pub struct Solver {
    nrows: usize,
    ncols: usize,
    ech: Echelon,
}

impl Solver {
    fn new(map: &LinearMap) -> Self {
        let n = map.nrows;
        let mut ech = Echelon::new(map.field, n + map.ncols());
        for (j, col) in map.cols.iter().enumerate() {
            let mut v = col.clone();
            v.add_term(n + j, &map.field.one());
            ech.insert(&v);
        }
        Solver {
            nrows: n,
            ncols: map.ncols(),
            ech,
        }
    }

    pub fn rank(&self) -> usize {
        self.ech.pivots().iter().filter(|&&c| c < self.nrows).count()
    }

    /// Some `x` with `map(x) = b`, canonical modulo the kernel.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let r = self.ech.reduce(b);
        if r.indices().any(|i| i < self.nrows) {
            return None;
        }
        Some(r.reindexed(|i| Some(i - self.nrows)).unwrap().neg())
    }

    pub fn kernel(&self) -> Vec<SparseVec> {
        let n = self.nrows;
        self.ech
            .sorted_rows()
            .into_iter()
            .filter(|(c, _)| *c >= n)
            .map(|(_, row)| row.reindexed(|i| Some(i - n)).unwrap())
            .collect()
    }

    pub fn domain_dim(&self) -> usize {
        self.ncols
    }
}

// ---------------------------------------------------------------------------
// Triplet matrices

/// Sparse matrix in canonical (row, col) triplet order.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    pub field: Field,
    pub nrows: usize,
    pub ncols: usize,
    triplets: Vec<(usize, usize, Scalar)>,
}

/// Result of [`SparseMatrix::solve_linear`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub rank: usize,
    pub kernel: Vec<SparseVec>,
    pub image: Vec<SparseVec>,
    pub pivot_cols: Vec<usize>,
}

/// Below this size elimination runs on dense storage.
pub const DENSE_CUTOFF: usize = 64;

impl SparseMatrix {
    /// Builds from triplets; duplicates are summed and zeros dropped.
    pub fn from_triplets(
        field: Field,
        nrows: usize,
        ncols: usize,
        t: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Self {
        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (i, j, c) in t {
            assert!(i < nrows && j < ncols, "triplet out of bounds");
            let e = acc.entry((i, j)).or_insert_with(|| field.zero());
            *e = &*e + &c;
        }
        SparseMatrix {
            field,
            nrows,
            ncols,
            triplets: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((i, j), c)| (i, j, c))
                .collect(),
        }
    }

    pub fn from_rows(field: Field, ncols: usize, rows: &[Vec<i64>]) -> Self {
        let t = rows.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(move |(j, &x)| (i, j, field.from_i64(x)))
        });
        SparseMatrix::from_triplets(field, rows.len(), ncols, t)
    }

    pub fn triplets(&self) -> &[(usize, usize, Scalar)] {
        &self.triplets
    }

    pub fn nnz(&self) -> usize {
        self.triplets.len()
    }

    pub fn to_map(&self) -> LinearMap {
        let mut cols = vec![SparseVec::new(); self.ncols];
        for (i, j, c) in &self.triplets {
            cols[*j].add_term(*i, c);
        }
        LinearMap::new(self.field, self.nrows, cols)
    }

    pub fn row_vectors(&self) -> Vec<SparseVec> {
        let mut rows = vec![SparseVec::new(); self.nrows];
        for (i, j, c) in &self.triplets {
            rows[*i].add_term(*j, c);
        }
        rows
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        self.to_map().compose(&other.to_map()).to_matrix()
    }

    fn check_field(&self) -> Result<()> {
        for (_, _, c) in &self.triplets {
            if c.field() != self.field {
                return Err(Error::MixedField(self.field, c.field()));
            }
        }
        Ok(())
    }

    /// Exact row reduction: rank, kernel basis, image basis (columns at the
    /// pivot positions) and pivot columns.
    pub fn solve_linear(&self) -> Result<Reduction> {
        self.check_field()?;
        let (rank, pivot_cols, kernel) =
            if self.nrows < DENSE_CUTOFF && self.ncols < DENSE_CUTOFF {
                dense_reduce(self)
            } else {
                let ech = Echelon::from_vectors(self.field, self.ncols, self.row_vectors().iter());
                let mut piv: Vec<usize> = ech.pivots().to_vec();
                piv.sort_unstable();
                (ech.rank(), piv, ech.null_space())
            };
        let map = self.to_map();
        let image = pivot_cols.iter().map(|&j| map.cols[j].clone()).collect();
        Ok(Reduction {
            rank,
            kernel,
            image,
            pivot_cols,
        })
    }
}

/// Dense Gauss–Jordan elimination; over ℚ it is fraction-free (Bareiss
/// style row updates on integer rows with content removal).
fn dense_reduce(m: &SparseMatrix) -> (usize, Vec<usize>, Vec<SparseVec>) {
    let (nr, nc) = (m.nrows, m.ncols);
    let field = m.field;
    let mut a: Vec<Vec<Scalar>> = vec![vec![field.zero(); nc]; nr];
    for (i, j, c) in &m.triplets {
        a[*i][*j] = c.clone();
    }
    if field == Field::Rational {
        // scale rows to integers
        for row in a.iter_mut() {
            let mut l = BigInt::one();
            for c in row.iter() {
                l = l.lcm(c.as_rational().denom());
            }
            let lr = Scalar::Rational(BigRational::from_integer(l));
            for c in row.iter_mut() {
                *c = &*c * &lr;
            }
        }
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        let Some(p) = (r..nr).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in 0..nr {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let b = a[i][c].clone();
            for j in 0..nc {
                let x = &(&piv * &a[i][j]) - &(&b * &a[r][j]);
                a[i][j] = x;
            }
            if field == Field::Rational {
                let mut g = BigInt::zero();
                for x in &a[i] {
                    g = g.gcd(x.as_rational().numer());
                }
                if !g.is_zero() && !g.is_one() {
                    let gi = Scalar::Rational(BigRational::new(BigInt::one(), g));
                    for x in a[i].iter_mut() {
                        *x = &*x * &gi;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nr {
            break;
        }
    }
    // normalize pivots to 1
    for (k, &c) in pivots.iter().enumerate() {
        let inv = a[k][c].inv().unwrap();
        for x in a[k].iter_mut() {
            *x = &*x * &inv;
        }
    }
    let kernel = (0..nc)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut x = SparseVec::unit(f, field);
            for (k, &pc) in pivots.iter().enumerate() {
                if !a[k][f].is_zero() {
                    x.add_term(pc, &-&a[k][f]);
                }
            }
            x
        })
        .collect();
    (pivots.len(), pivots, kernel)
}

/// Affine solution set `x₀ + span(kernel)` of a linear system, or empty.
#[derive(Clone, Debug)]
pub struct AffineSolutions {
    pub particular: SparseVec,
    pub directions: Vec<SparseVec>,
}

/// Solves `map(x) = b`.
pub fn solve_affine(map: &LinearMap, b: &SparseVec) -> Option<AffineSolutions> {
    let s = map.solver();
    let x0 = s.solve(b)?;
    Some(AffineSolutions {
        particular: x0,
        directions: s.kernel(),
    })
}

/// Iterates all `p^k` vectors of `span(basis)` over a finite field, in a
/// fixed lexicographic order of coefficient tuples.
pub fn enumerate_span(field: Field, basis: &[SparseVec]) -> Result<Vec<SparseVec>> {
    let elems = field.elements()?;
    let p = elems.len();
    let k = basis.len();
    let total = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > 1 << 24 {
        return Err(Error::CapExceeded {
            needed: total,
            cap: 1 << 24,
        });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0usize; k];
    loop {
        let mut v = SparseVec::new();
        for (d, b) in digits.iter().zip(basis) {
            v.add_scaled(b, &elems[*d]);
        }
        out.push(v);
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Sorts vectors by their coordinate lists, for deterministic output.
pub fn sort_vectors(vs: &mut [SparseVec]) {
    vs.sort_by_cached_key(|v| {
        v.iter()
            .map(|(i, c)| (i, c.to_decimal()))
            .collect::<Vec<_>>()
    });
}

/// Whether a rational vector has a negative leading coefficient.
pub fn leading_negative(v: &SparseVec) -> bool {
    v.leading().map(|(_, c)| c.is_negative_rational()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn proportional_rows_rank_one() {
        let m = SparseMatrix::from_rows(q(), 2, &[vec![1, 2], vec![2, 4]]);
        let r = m.solve_linear().unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel.len(), 1);
        let k = &r.kernel[0];
        assert!(m.to_map().apply(k).is_zero());
    }

    #[test]
    fn identity_full_rank() {
        let m = SparseMatrix::from_rows(q(), 3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let r = m.solve_linear().unwrap();
        assert_eq!(r.rank, 3);
        assert!(r.kernel.is_empty());
    }

    #[test]
    fn char_two_symmetric() {
        let f = Field::Prime(2);
        let m = SparseMatrix::from_rows(f, 2, &[vec![1, 1], vec![1, 1]]);
        let r = m.solve_linear().unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(
            r.kernel,
            vec![SparseVec::from_pairs([(0, f.one()), (1, f.one())])]
        );
    }

    #[test]
    fn mixed_field_rejected() {
        let m = SparseMatrix {
            field: q(),
            nrows: 1,
            ncols: 1,
            triplets: vec![(0, 0, Field::Prime(3).one())],
        };
        assert!(matches!(m.solve_linear(), Err(Error::MixedField(..))));
    }

    #[test]
    fn solver_finds_particular_solution() {
        let f = q();
        let m = SparseMatrix::from_rows(f, 3, &[vec![1, 2, 3], vec![0, 1, 1]]).to_map();
        let b = SparseVec::from_pairs([(0, f.from_i64(5)), (1, f.from_i64(1))]);
        let s = m.solver();
        let x = s.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
        assert_eq!(s.kernel().len(), 1);
        assert_eq!(s.rank(), 2);
        let bad = LinearMap::new(f, 2, vec![SparseVec::unit(0, f)]);
        assert!(bad.solver().solve(&SparseVec::unit(1, f)).is_none());
    }

    #[test]
    fn echelon_normal_form_is_canonical() {
        let f = q();
        let a = SparseVec::from_pairs([(0, f.from_i64(2)), (1, f.from_i64(4))]);
        let b = SparseVec::from_pairs([(1, f.from_i64(3)), (2, f.from_i64(1))]);
        let e = Echelon::from_vectors(f, 3, [&a, &b]);
        let v = SparseVec::from_pairs([(0, f.from_i64(1)), (2, f.from_i64(7))]);
        let w = v.sum(&a.scaled(&f.from_i64(5))).difference(&b);
        assert_eq!(e.reduce(&v), e.reduce(&w));
        assert!(e.contains(&a.sum(&b)));
    }

    #[test]
    fn span_enumeration_counts() {
        let f = Field::Prime(3);
        let basis = vec![SparseVec::unit(0, f), SparseVec::unit(2, f)];
        let all = enumerate_span(f, &basis).unwrap();
        assert_eq!(all.len(), 9);
        assert!(all[0].is_zero());
    }

    #[test]
    fn sparse_and_dense_paths_agree() {
        let f = q();
        let n = 70;
        let t = (0..n).flat_map(|i| {
            [
                (i, i, f.from_i64(1 + (i as i64 % 3))),
                (i, (i * 7 + 1) % n, f.from_i64(-2)),
            ]
        });
        let big = SparseMatrix::from_triplets(f, n, n, t);
        let r = big.solve_linear().unwrap();
        assert_eq!(r.rank + r.kernel.len(), n);
        for k in &r.kernel {
            assert!(big.to_map().apply(k).is_zero());
        }
        let small = SparseMatrix::from_triplets(
            f,
            10,
            10,
            big.triplets()
                .iter()
                .filter(|(i, j, _)| *i < 10 && *j < 10)
                .cloned(),
        );
        let dense = small.solve_linear().unwrap();
        let sparse = Echelon::from_vectors(f, 10, small.row_vectors().iter());
        assert_eq!(dense.rank, sparse.rank());
    }
}
