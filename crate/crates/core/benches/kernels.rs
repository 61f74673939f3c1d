//! Multi-threaded versus single-threaded evaluation of the heavy kernels.
//!
//! The single-thread pool runs the same code path as a build without the
//! `parallel` feature.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pwlab_core::fixtures;
use pwlab_core::projective::{curvature, polynomial_solutions, AffineConnection, SolutionKind};
use pwlab_core::pwext::{build, curvature_dictionary};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    let mut v = vec![("sequential", one)];
    if pwlab_core::par::is_parallel() {
        v.push(("parallel", all));
    }
    v
}

fn fixtures() -> Vec<(&'static str, AffineConnection)> {
    vec![("E2", fixtures::e2()), ("E3", fixtures::e3()), ("curved_n3", fixtures::curved_n3())]
}

fn kernels(c: &mut Criterion) {
    let pools = pools();
    let mut g = c.benchmark_group("curvature_dictionary");
    g.sample_size(10);
    for (name, d) in fixtures() {
        for (mode, pool) in &pools {
            g.bench_with_input(BenchmarkId::new(*mode, name), &d, |b, d| {
                // a fresh geometry each time, the intrinsic curvature is cached
                b.iter(|| pool.install(|| curvature_dictionary(&build(d).unwrap()).unwrap()))
            });
        }
    }
    g.finish();

    let mut g = c.benchmark_group("projective_curvature");
    for (name, d) in fixtures() {
        for (mode, pool) in &pools {
            g.bench_with_input(BenchmarkId::new(*mode, name), &d, |b, d| b.iter(|| pool.install(|| curvature(d).unwrap())));
        }
    }
    g.finish();

    let mut g = c.benchmark_group("killing_solutions");
    g.sample_size(10);
    for (name, d) in fixtures() {
        for (mode, pool) in &pools {
            g.bench_with_input(BenchmarkId::new(*mode, name), &d, |b, d| {
                b.iter(|| pool.install(|| polynomial_solutions(d, SolutionKind::KillingOneForm, 2).unwrap()))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
