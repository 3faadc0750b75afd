//! Sparse structure constants for families of multilinear maps.

use std::collections::BTreeMap;

use crate::field::{Field, Scalar};
use crate::linalg::SparseVec;

/// Sparse multilinear maps `{φ_n}`: for every arity, a table from input
/// basis tuples to output vectors.  Tuples absent from a table map to zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StructureMaps {
    tables: Vec<BTreeMap<Vec<usize>, SparseVec>>,
}

impl StructureMaps {
    pub fn new() -> Self {
        Self::default()
    }

    /// Largest arity with a stored nonzero entry (0 when empty).
    pub fn max_arity(&self) -> usize {
        self.tables
            .iter()
            .rposition(|t| !t.is_empty())
            .unwrap_or(0)
    }

    pub fn table(&self, n: usize) -> Option<&BTreeMap<Vec<usize>, SparseVec>> {
        self.tables.get(n)
    }

    /// Entries of arity `n` in canonical tuple order.
    pub fn entries(&self, n: usize) -> impl Iterator<Item = (&Vec<usize>, &SparseVec)> {
        self.tables.get(n).into_iter().flat_map(|t| t.iter())
    }

    /// All entries of all arities.
    pub fn all_entries(&self) -> impl Iterator<Item = (&Vec<usize>, &SparseVec)> {
        self.tables.iter().flat_map(|t| t.iter())
    }

    pub fn get(&self, inputs: &[usize]) -> Option<&SparseVec> {
        self.tables.get(inputs.len())?.get(inputs)
    }

    /// Adds `v` to the value on the tuple, removing it if it cancels.
    pub fn add(&mut self, inputs: Vec<usize>, v: &SparseVec) {
        if v.is_zero() {
            return;
        }
        let n = inputs.len();
        if self.tables.len() <= n {
            self.tables.resize_with(n + 1, BTreeMap::new);
        }
        let t = &mut self.tables[n];
        let e = t.entry(inputs.clone()).or_default();
        e.add(v);
        if e.is_zero() {
            t.remove(&inputs);
        }
    }

    pub fn add_term(&mut self, inputs: Vec<usize>, out: usize, c: &Scalar) {
        self.add(inputs, &SparseVec::from_pairs([(out, c.clone())]));
    }

    /// Replaces the value on the tuple.
    pub fn set(&mut self, inputs: Vec<usize>, v: SparseVec) {
        let n = inputs.len();
        if self.tables.len() <= n {
            self.tables.resize_with(n + 1, BTreeMap::new);
        }
        if v.is_zero() {
            self.tables[n].remove(&inputs);
        } else {
            self.tables[n].insert(inputs, v);
        }
    }

    /// Whether some stored tuple of arity `n` starts with `prefix`.
    pub fn has_prefix(&self, n: usize, prefix: &[usize]) -> bool {
        let Some(t) = self.tables.get(n) else {
            return false;
        };
        if prefix.is_empty() {
            return !t.is_empty();
        }
        t.range(prefix.to_vec()..)
            .next()
            .map(|(k, _)| k.starts_with(prefix))
            .unwrap_or(false)
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.tables.iter().map(BTreeMap::len).sum()
    }

    /// Applies `f` to every value, keeping the layout.
    pub fn map_values(&self, f: impl Fn(&[usize], &SparseVec) -> SparseVec) -> StructureMaps {
        let mut out = StructureMaps::new();
        for t in &self.tables {
            for (k, v) in t {
                out.set(k.clone(), f(k, v));
            }
        }
        out
    }

    /// Evaluates the arity-`args.len()` map on vectors by multilinear
    /// expansion, pruning partial tuples with no stored continuation.
    pub fn eval(&self, args: &[&SparseVec], field: Field) -> SparseVec {
        let n = args.len();
        let mut out = SparseVec::new();
        if self.tables.get(n).map(|t| t.is_empty()).unwrap_or(true) {
            return out;
        }
        if args.iter().any(|a| a.is_zero()) {
            return out;
        }
        let mut prefix = Vec::with_capacity(n);
        self.expand(args, &mut prefix, field.one(), &mut out);
        out
    }

    fn expand(&self, args: &[&SparseVec], prefix: &mut Vec<usize>, coef: Scalar, out: &mut SparseVec) {
        let n = args.len();
        if prefix.len() == n {
            if let Some(v) = self.get(prefix) {
                out.add_scaled(v, &coef);
            }
            return;
        }
        let k = prefix.len();
        for (i, c) in args[k].iter() {
            prefix.push(i);
            if self.has_prefix(n, prefix) {
                self.expand(args, prefix, &coef * c, out);
            }
            prefix.pop();
        }
    }
}
