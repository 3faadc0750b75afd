//! Built-in example algebras.

use std::collections::BTreeSet;

use crate::ainfty::algebra::{AInfAlgebra, AlgebraBuilder};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::GradedSpace;
use crate::linalg::SparseVec;

/// Sign of merging two disjoint sorted index lists into one sorted list.
fn merge_sign(s: &[usize], t: &[usize]) -> Option<i64> {
    let mut inv = 0;
    for a in s {
        for b in t {
            if a == b {
                return None;
            }
            if a > b {
                inv += 1;
            }
        }
    }
    Some(inv)
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u32..(1 << n))
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

fn subset_label(prefix: &str, s: &[usize]) -> String {
    s.iter().map(|i| format!("{prefix}{}", i + 1)).collect()
}

/// The exterior algebra `Λ(kⁿ)` on degree-1 generators `x1, …, xn`.
pub fn kpoints(field: Field, n: usize) -> Result<AInfAlgebra> {
    if n > 12 {
        return Err(Error::OutOfRange("kpoints supports n ≤ 12".into()));
    }
    let subs = subsets(n);
    let labels: Vec<String> = subs
        .iter()
        .map(|s| if s.is_empty() { "1".to_string() } else { subset_label("x", s) })
        .collect();
    let space = GradedSpace::new(labels.iter().cloned().zip(subs.iter().map(|s| s.len() as i64)))?;
    let mut b = AlgebraBuilder::new(field, space);
    for (i, s) in subs.iter().enumerate().skip(1) {
        for (j, t) in subs.iter().enumerate().skip(1) {
            if let Some(e) = merge_sign(s, t) {
                let mut u: Vec<usize> = s.iter().chain(t).copied().collect();
                u.sort();
                let k = subs.iter().position(|x| *x == u).unwrap();
                b.add_op(vec![i, j], &SparseVec::unit(k, field).scaled(&field.sign(e)));
            }
        }
    }
    b.unit_with_laws("1")?.augmented().build()
}

/// `k ⊕ k^g` with `g` degree-1 generators and all products zero.  The
/// generator is `x` for `g = 1` and `x1, …, xg` otherwise.
pub fn njac(field: Field, g: usize) -> Result<AInfAlgebra> {
    let mut basis = vec![("1".to_string(), 0)];
    if g == 1 {
        basis.push(("x".to_string(), 1));
    } else {
        basis.extend((1..=g).map(|i| (format!("x{i}"), 1)));
    }
    AlgebraBuilder::new(field, GradedSpace::new(basis)?)
        .unit_with_laws("1")?
        .augmented()
        .build()
}

/// `1, x, y` in degrees `0, 1, 2` with `m₂(x,x) = y`.
pub fn xy(field: Field) -> Result<AInfAlgebra> {
    AlgebraBuilder::new(
        field,
        GradedSpace::from_strs(&[("1", 0), ("x", 1), ("y", 2)])?,
    )
    .op(&["x", "x"], &[("y", 1)])?
    .unit_with_laws("1")?
    .augmented()
    .build()
}

/// The `xy` algebra plus an acyclic pair `d u = v` (`|u| = 1`), which has
/// the same cohomology.
pub fn xy_acyclic(field: Field) -> Result<AInfAlgebra> {
    AlgebraBuilder::new(
        field,
        GradedSpace::from_strs(&[("1", 0), ("x", 1), ("u", 1), ("y", 2), ("v", 2)])?,
    )
    .op(&["x", "x"], &[("y", 1)])?
    .op(&["u"], &[("v", 1)])?
    .unit_with_laws("1")?
    .augmented()
    .build()
}

/// A DG algebra with a nonvanishing triple Massey product `⟨a,b,c⟩ = [z]`:
/// `ab = du = p`, `bc = dv = q`, `uc = z`.
pub fn massey(field: Field) -> Result<AInfAlgebra> {
    AlgebraBuilder::new(
        field,
        GradedSpace::from_strs(&[
            ("1", 0),
            ("a", 1),
            ("b", 1),
            ("c", 1),
            ("u", 1),
            ("v", 1),
            ("p", 2),
            ("q", 2),
            ("z", 2),
        ])?,
    )
    .op(&["u"], &[("p", 1)])?
    .op(&["v"], &[("q", 1)])?
    .op(&["a", "b"], &[("p", 1)])?
    .op(&["b", "c"], &[("q", 1)])?
    .op(&["u", "c"], &[("z", 1)])?
    .unit_with_laws("1")?
    .augmented()
    .build()
}

fn monomials(m: usize, deg: usize) -> Vec<Vec<usize>> {
    // Exponent vectors of total degree `deg` in `m` variables, lex order.
    fn rec(m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == m {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(m, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(m, deg, &mut Vec::new(), &mut out);
    out
}

fn monomial_label(e: &[usize]) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("y{}", i + 1)
            } else {
                format!("y{}^{k}", i + 1)
            }
        })
        .collect()
}

/// `⊕_i Sym^i(k^m) ⊗ Λ^i(k^{n−m})` in degree `i`, with product
/// `(p⊗ω)(p'⊗ω') = pp' ⊗ ω∧ω'`.
pub fn ngr(field: Field, n: usize, m: usize) -> Result<AInfAlgebra> {
    if m > n || n > 10 {
        return Err(Error::OutOfRange("ngr needs m ≤ n ≤ 10".into()));
    }
    let q = n - m;
    let mut basis: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for i in 0..=q {
        if m == 0 && i > 0 {
            break;
        }
        let subs: Vec<Vec<usize>> = subsets(q).into_iter().filter(|s| s.len() == i).collect();
        for mono in monomials(m, i) {
            for s in &subs {
                basis.push((mono.clone(), s.clone()));
            }
        }
    }
    let labels: Vec<(String, i64)> = basis
        .iter()
        .map(|(p, s)| {
            if s.is_empty() {
                ("1".to_string(), 0)
            } else {
                (
                    format!("{}*{}", monomial_label(p), subset_label("z", s)),
                    s.len() as i64,
                )
            }
        })
        .collect();
    let space = GradedSpace::new(labels)?;
    let mut b = AlgebraBuilder::new(field, space);
    let seen: BTreeSet<usize> = (1..basis.len()).collect();
    for &i in &seen {
        for &j in &seen {
            let (p, s) = &basis[i];
            let (p2, t) = &basis[j];
            let Some(e) = merge_sign(s, t) else { continue };
            let mut u: Vec<usize> = s.iter().chain(t).copied().collect();
            u.sort();
            let pp: Vec<usize> = p.iter().zip(p2).map(|(a, b)| a + b).collect();
            let Some(k) = basis.iter().position(|(x, y)| *x == pp && *y == u) else {
                continue;
            };
            b.add_op(vec![i, j], &SparseVec::unit(k, field).scaled(&field.sign(e)));
        }
    }
    b.unit_with_laws("1")?.augmented().build()
}

/// Looks up a builtin by identifier such as `kpoints(2)` or `xy`.
pub fn builtin(field: Field, id: &str) -> Result<AInfAlgebra> {
    let id = id.trim();
    let (name, args) = match id.find('(') {
        Some(p) => {
            let inner = id[p + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("malformed builtin `{id}`")))?;
            let args = inner
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad builtin argument in `{id}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            (&id[..p], args)
        }
        None => (id, Vec::new()),
    };
    match (name, args.as_slice()) {
        ("kpoints", [n]) => kpoints(field, *n),
        ("njac", [g]) => njac(field, *g),
        ("ngr", [n, m]) => ngr(field, *n, *m),
        ("xy", []) => xy(field),
        ("xy_acyclic", []) => xy_acyclic(field),
        ("massey", []) => massey(field),
        _ => Err(Error::Parse(format!("unknown builtin `{id}`"))),
    }
}
