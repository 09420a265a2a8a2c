use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polyshadow::hull::{hull_f_vector, simulate_expected_f, zonotope_f_vector, SimConfig, SimModel};
use polyshadow_bench::{gaussian_cloud, zonotope_generators};

fn hull(c: &mut Criterion) {
    let mut group = c.benchmark_group("hull_f_vector");
    for d in [2, 3, 4] {
        let cloud = gaussian_cloud(60, d, 5);
        group.bench_with_input(BenchmarkId::new("gaussian_60", d), &cloud, |b, cloud| {
            b.iter(|| hull_f_vector(black_box(cloud)).unwrap())
        });
    }
    group.finish();
}

fn zonotope(c: &mut Criterion) {
    let mut group = c.benchmark_group("zonotope_f_vector");
    for (n, d) in [(6, 3), (10, 3), (8, 4)] {
        let gens = zonotope_generators(n, d, 9);
        group.bench_with_input(BenchmarkId::new(format!("d{d}"), n), &gens, |b, gens| {
            b.iter(|| zonotope_f_vector(black_box(gens), d).unwrap())
        });
    }
    group.finish();
}

fn simulation(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    group.bench_function("gaussian_10_3_x1000", |b| {
        b.iter(|| {
            simulate_expected_f(&SimConfig {
                model: SimModel::Gaussian,
                n: 10,
                d: 3,
                replications: 1000,
                seed: 2,
                workers: 1,
            })
            .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, hull, zonotope, simulation);
criterion_main!(benches);
