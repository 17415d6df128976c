use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use crdyn_bench::random_relations;
use crdyn_core::corpus::{cross, ex22, rene2, tistile};
use crdyn_core::finite::oracle_flags;
use crdyn_core::numeric::{invariant_closure, simulate_orbit, ClosureMode};
use crdyn_core::{classify, IntervalSet, OrbitPolicy};

fn deciders(c: &mut Criterion) {
    let mut group = c.benchmark_group("finite");
    for n in [4, 6, 8] {
        let gs = random_relations(n, 64, 1);
        group.bench_with_input(BenchmarkId::new("classify", n), &gs, |b, gs| {
            b.iter(|| {
                gs.iter()
                    .map(|g| classify(black_box(g)).flags.0[0] as usize)
                    .sum::<usize>()
            })
        });
        group.bench_with_input(BenchmarkId::new("oracle", n), &gs, |b, gs| {
            b.iter(|| {
                gs.iter()
                    .map(|g| oracle_flags(black_box(g)).unwrap().0[0] as usize)
                    .sum::<usize>()
            })
        });
    }
    group.finish();
}

fn orbits(c: &mut Criterion) {
    let mut group = c.benchmark_group("orbit");
    let lambda = (5f64.sqrt() - 1.0) / 2.0;
    let cases = [
        ("tistile-first", tistile(lambda), OrbitPolicy::First, 0.0),
        ("cross-greedy", cross(), OrbitPolicy::Greedy, 0.3),
        ("rene2-greedy", rene2(10), OrbitPolicy::Greedy, 0.0),
    ];
    for (name, g, policy, x0) in &cases {
        group.bench_function(*name, |b| {
            b.iter(|| {
                simulate_orbit(black_box(g), *x0, 2000, *policy, 0)
                    .unwrap()
                    .orbit
                    .len()
            })
        });
    }
    group.finish();
}

fn closures(c: &mut Criterion) {
    let g = ex22();
    let s0 = IntervalSet::point(0.0);
    c.bench_function("closure/ex22-inner", |b| {
        b.iter(|| {
            invariant_closure(&g, black_box(&s0), ClosureMode::Inner, 0.0, 60)
                .unwrap()
                .set
                .len()
        })
    });
    c.bench_function("closure/ex22-outer", |b| {
        b.iter(|| {
            invariant_closure(&g, black_box(&s0), ClosureMode::Outer, 1e-3, 1000)
                .unwrap()
                .set
                .len()
        })
    });
}

criterion_group!(benches, deciders, orbits, closures);
criterion_main!(benches);
