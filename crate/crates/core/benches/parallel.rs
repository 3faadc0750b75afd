//! Sequential against data-parallel execution of the main kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stasheff::ainfty::builtins::{massey, njac, xy_acyclic};
use stasheff::artin::trunc_poly;
use stasheff::exec::Exec;
use stasheff::field::Field;
use stasheff::mc::{McSetting, MC_ENUMERATION_CAP};
use stasheff::transfer::minimal_model_with;

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn stasheff_identities(c: &mut Criterion) {
    let a = massey(Field::Rational).unwrap();
    let mut g = c.benchmark_group("stasheff_identities_arity_4");
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(a.check_axioms_with(4, exec).unwrap()))
        });
    }
    g.finish();
}

fn mc_enumeration(c: &mut Criterion) {
    let f2 = Field::prime(2).unwrap();
    let s = McSetting::new(&njac(f2, 2).unwrap(), &trunc_poly(f2, 4, 0).unwrap()).unwrap();
    let mut g = c.benchmark_group("mc_enumeration_njac2_t4");
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(s.enumerate_mc_with(exec, MC_ENUMERATION_CAP).unwrap()))
        });
    }
    g.finish();
}

fn transfer(c: &mut Criterion) {
    let cdg = xy_acyclic(Field::Rational).unwrap();
    let mut g = c.benchmark_group("minimal_model_arity_5");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(minimal_model_with(&cdg, 5, exec).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, stasheff_identities, mc_enumeration, transfer);
criterion_main!(benches);
