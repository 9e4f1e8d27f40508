use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ltfb_core::combinatorics::{wallenius_pmf, WalleniusParams};
use ltfb_core::degree::{n_layer_reduced_dist, reduced_degree_dist, robust_soliton, TwoLayerAnalyzer};
use ltfb_core::sim::{run_trial, TrialConfig};
use ltfb_core::{FeedbackPolicy, LayerConfig, RsdParams};

fn rsd(k: usize) -> RsdParams {
    RsdParams::new(k, 0.1, 1.0).unwrap()
}

fn reduced(c: &mut Criterion) {
    let mut g = c.benchmark_group("reduced_degree_dist");
    for k in [100, 1000, 4000] {
        let pi = robust_soliton(rsd(k)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| reduced_degree_dist(&pi, black_box(k / 2)).unwrap())
        });
    }
    g.finish();
}

fn layered(c: &mut Criterion) {
    let pi = robust_soliton(rsd(100)).unwrap();
    let layers = LayerConfig::two_layer(100, 0.5, 9.0).unwrap();
    c.bench_function("two_layer_analyzer/k=100", |b| {
        b.iter(|| TwoLayerAnalyzer::new(&pi, &layers).unwrap().redundancy(black_box(20), 40).unwrap())
    });
    let pi = robust_soliton(rsd(60)).unwrap();
    let three = LayerConfig::new(vec![20, 20, 20], vec![9.0, 3.0, 1.0]).unwrap();
    c.bench_function("n_layer/k=60,N=3", |b| {
        b.iter(|| n_layer_reduced_dist(&pi, &three, black_box(&[5, 10, 20])).unwrap())
    });
}

fn wallenius(c: &mut Criterion) {
    let mut g = c.benchmark_group("wallenius_pmf");
    let two = WalleniusParams::new(vec![500, 500], vec![9.0, 1.0], 40).unwrap();
    g.bench_function("two_groups", |b| b.iter(|| wallenius_pmf(black_box(&[30, 10]), &two).unwrap()));
    let four = WalleniusParams::new(vec![100, 200, 300, 400], vec![8.0, 4.0, 2.0, 1.0], 40).unwrap();
    g.bench_function("four_groups", |b| b.iter(|| wallenius_pmf(black_box(&[15, 10, 10, 5]), &four).unwrap()));
    g.finish();
}

fn decode(c: &mut Criterion) {
    let mut g = c.benchmark_group("decode_trial");
    g.sample_size(20);
    let plain = TrialConfig::new(rsd(1000));
    g.bench_function("k=1000/no_feedback", |b| {
        let mut t = 0;
        b.iter(|| {
            t += 1;
            run_trial(&plain, 1, t).unwrap()
        })
    });
    let acked = TrialConfig {
        layers: Some(LayerConfig::two_layer(1000, 0.5, 9.0).unwrap()),
        policy: FeedbackPolicy::LayerAck { reparameterize: true },
        ..TrialConfig::new(rsd(1000))
    };
    g.bench_function("k=1000/two_layer_ack", |b| {
        let mut t = 0;
        b.iter(|| {
            t += 1;
            run_trial(&acked, 1, t).unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, reduced, layered, wallenius, decode);
criterion_main!(benches);
