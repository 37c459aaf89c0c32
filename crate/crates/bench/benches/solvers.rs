//! Timings for the solver ladder: base interpolation, the perturbed
//! system, the full layered run, and the dense oracle for scale.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use gsv_interp::mapsolver::{dense_map_solve, dr_run, perturbed_interpolate, SolverParams};
use gsv_interp::pipeline::{interpolate_patch, Mode};
use gsv_interp_bench::{gained_model, noisy_ramp, patch_instance, square_theta};

fn solver_ladder(c: &mut Criterion) {
    let params = SolverParams::default();
    let mut group = c.benchmark_group("patch_solvers");
    group.sample_size(20);
    for &size in &[16usize, 32, 64] {
        let truth = noisy_ramp(size, 42);
        let inst = patch_instance(&truth, 0.2, 0.1);

        group.bench_with_input(BenchmarkId::new("baseline", size), &size, |b, _| {
            b.iter(|| inst.theta.interpolate(black_box(&inst.y)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("bicg", size), &size, |b, _| {
            b.iter(|| {
                perturbed_interpolate(&inst.theta, &inst.p, black_box(&inst.y), &params).unwrap()
            })
        });
        group.bench_with_input(BenchmarkId::new("dr", size), &size, |b, _| {
            b.iter(|| {
                dr_run(
                    &inst.theta,
                    &inst.p,
                    &inst.lap,
                    black_box(&inst.y),
                    &params,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn whole_patch_pipeline(c: &mut Criterion) {
    let model = gained_model(0.2, 0.1);
    let mut group = c.benchmark_group("pipeline_patch");
    group.sample_size(10);
    for &size in &[32usize, 64] {
        let truth = noisy_ramp(size, 42);
        group.bench_with_input(BenchmarkId::from_parameter(size), &size, |b, _| {
            b.iter(|| interpolate_patch(black_box(&truth), (0, 0), &model, Mode::Dr).unwrap())
        });
    }
    group.finish();
}

fn dense_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense_oracle");
    group.sample_size(20);
    for &n in &[16usize, 32] {
        let theta = square_theta(n, 7);
        let y: Vec<f64> = (0..n).map(|i| 0.2 + 0.6 * (i as f64 / n as f64)).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| dense_map_solve(black_box(&theta), &y, 1.0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, solver_ladder, whole_patch_pipeline, dense_oracle);
criterion_main!(benches);
