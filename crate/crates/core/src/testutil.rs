//! Seeded random instances shared by the unit tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::ainfty::StructureMaps;
use crate::field::Field;
use crate::graded::GradedSpace;
use crate::linalg::SparseVec;

pub use crate::random::rng;

/// A small graded space with degrees in `lo..=hi`.
pub fn random_space(r: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64) -> GradedSpace {
    GradedSpace::new((0..dim).map(|i| (format!("e{i}"), r.random_range(lo..=hi)))).unwrap()
}

/// Random degree-correct maps of arity `1..=max_n` with degree `shift(n)`,
/// not satisfying any identity.
pub fn random_maps(
    r: &mut ChaCha8Rng,
    field: Field,
    src: &GradedSpace,
    dst: &GradedSpace,
    max_n: usize,
    density: f64,
    shift: impl Fn(usize) -> i64,
) -> StructureMaps {
    let mut maps = StructureMaps::new();
    let dim = src.dim();
    for n in 1..=max_n {
        for k in 0..dim.pow(n as u32) {
            let t = crate::ainfty::algebra::decode_tuple(k, dim, n);
            let d: i64 = t.iter().map(|&i| src.degree(i)).sum::<i64>() + shift(n);
            let outs = dst.in_degree(d);
            if outs.is_empty() || !r.random_bool(density) {
                continue;
            }
            let o = outs[r.random_range(0..outs.len())];
            let c = field.from_i64(r.random_range(1..=3) * if r.random_bool(0.5) { 1 } else { -1 });
            maps.add(t, &SparseVec::from_pairs([(o, c)]));
        }
    }
    maps
}

pub use crate::random::random_assoc;
