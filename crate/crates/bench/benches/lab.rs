use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use greedylab_bench::batch;
use greedylab_core::chebyshev::{sigma_profile, theta_profile};
use greedylab_core::classes::imp1_vector;
use greedylab_core::democracy::{h_l, h_r};
use greedylab_core::greedy::DEFAULT_CAP;
use greedylab_core::weights::dilation_indices;
use greedylab_core::{chebyshev_project, SequenceSpace, Weight};

fn norms(c: &mut Criterion) {
    let xs = batch(256, 32, 256);
    let mut g = c.benchmark_group("norm");
    for s in SequenceSpace::bundled() {
        g.bench_with_input(BenchmarkId::from_parameter(s.name()), &s, |b, s| {
            b.iter(|| xs.iter().map(|x| s.norm(black_box(x))).sum::<f64>())
        });
    }
    g.finish();
}

fn chebyshev(c: &mut Criterion) {
    let xs = batch(16, 6, 12);
    let mut g = c.benchmark_group("chebyshev_project");
    for s in SequenceSpace::bundled() {
        g.bench_with_input(BenchmarkId::from_parameter(s.name()), &s, |b, s| {
            b.iter(|| {
                for x in &xs {
                    let a: Vec<usize> = x.support().into_iter().take(2).collect();
                    black_box(chebyshev_project(s, x, &a).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn summing_profiles(c: &mut Criterion) {
    let mut g = c.benchmark_group("summing_profiles");
    g.sample_size(10);
    let s = SequenceSpace::summing();
    for j in [2usize, 3, 4] {
        let x = imp1_vector(j).unwrap().x;
        g.bench_with_input(BenchmarkId::new("sigma", j), &x, |b, x| {
            b.iter(|| sigma_profile(&s, x, x.len(), 4).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("theta", j), &x, |b, x| {
            b.iter(|| theta_profile(&s, x, x.len(), DEFAULT_CAP).unwrap())
        });
    }
    g.finish();
}

fn democracy(c: &mut Criterion) {
    let mut g = c.benchmark_group("democracy");
    g.sample_size(10);
    let s = SequenceSpace::summing();
    for m in [3usize, 4, 5] {
        g.bench_with_input(BenchmarkId::new("h_r", m), &m, |b, &m| {
            b.iter(|| h_r(&s, m, 12).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("h_l", m), &m, |b, &m| {
            b.iter(|| h_l(&s, m, 12).unwrap())
        });
    }
    g.finish();
}

fn weights(c: &mut Criterion) {
    let w = Weight::sqrt_log(1.0);
    c.bench_function("dilation_indices_256x1024", |b| {
        b.iter(|| dilation_indices(&w, 256, 1024).unwrap())
    });
}

criterion_group!(benches, norms, chebyshev, summing_profiles, democracy, weights);
criterion_main!(benches);
