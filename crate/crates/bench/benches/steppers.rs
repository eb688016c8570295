use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use nimtheta::analysis::table1;
use nimtheta::{nim_theta_step, solve, StageTime, StepPoint};
use nimtheta_bench::{logistic, methods, rossler};

fn single_step(c: &mut Criterion) {
    let problem = rossler(1.0).problem;
    let y = [1.0, -2.0, 0.5];
    let nu = [0.9, -1.8, 0.4];
    let mut group = c.benchmark_group("nim_step");
    for k in [2usize, 3, 4, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            let at = StepPoint::new(0.0, 0.01, &y, &nu, &nu);
            b.iter(|| {
                nim_theta_step(&problem, black_box(&at), 0.5, k, StageTime::Advanced).unwrap()
            })
        });
    }
    group.finish();
}

fn logistic_solve(c: &mut Criterion) {
    let named = logistic(100.0);
    let mut group = c.benchmark_group("delay_logistic_T100_h0.01");
    for (label, config) in methods(0.01, 1.0) {
        group.bench_function(label, |b| {
            b.iter(|| solve(black_box(&named.problem), &config).unwrap())
        });
    }
    group.finish();
}

fn rossler_solve(c: &mut Criterion) {
    let named = rossler(50.0);
    let mut group = c.benchmark_group("rossler_T50_h0.01");
    group.sample_size(20);
    for (label, config) in methods(0.01, 0.5) {
        group.bench_function(label, |b| {
            b.iter(|| solve(black_box(&named.problem), &config).unwrap())
        });
    }
    group.finish();
}

fn table(c: &mut Criterion) {
    c.bench_function("table1_h0.01", |b| {
        b.iter(|| table1(black_box(0.01)).unwrap())
    });
}

criterion_group!(benches, single_step, logistic_solve, rossler_solve, table);
criterion_main!(benches);
