use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hopnet::graph::{build_ma_network, build_threshold_graph_brute};
use hopnet::percolation::critical_zetas;
use hopnet::walk::WalkNetwork;
use hopnet::*;
use hopnet_bench::{square, stripe};

fn graph_construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("threshold_graph");
    for half in [8.0, 16.0] {
        let conf = square(1.0, half, 1);
        group.bench_with_input(BenchmarkId::new("cells", conf.len()), &conf, |b, conf| {
            b.iter(|| build_threshold_graph(black_box(conf), 3.0, 4.0).unwrap())
        });
        if half <= 8.0 {
            group.bench_with_input(BenchmarkId::new("brute", conf.len()), &conf, |b, conf| {
                b.iter(|| build_threshold_graph_brute(black_box(conf), 3.0, 4.0).unwrap())
            });
        }
    }
    group.finish();
}

fn crossings(c: &mut Criterion) {
    let (geometry, conf) = stripe(2.0, 24.0, 1.5, 2);
    let graph = build_threshold_graph(&conf, 1.5, 0.4).unwrap();
    c.bench_function("has_lr_crossing", |b| b.iter(|| has_lr_crossing(black_box(&graph), &geometry)));
    c.bench_function("max_vertex_disjoint_crossings", |b| {
        b.iter(|| max_vertex_disjoint_crossings(black_box(&graph), &geometry))
    });
}

fn potential(c: &mut Criterion) {
    let (geometry, conf) = stripe(1.0, 16.0, 12.0, 3);
    let net = build_ma_network(&conf, 1.0, &geometry, (-12.0f64).exp()).unwrap();
    let circuit = Circuit::new(&net, &geometry);
    c.bench_function("solve_potential_ell16", |b| b.iter(|| circuit.solve(black_box(1e-10)).unwrap()));
}

fn thresholds(c: &mut Criterion) {
    let law = EnergyLaw::uniform_signed();
    let mut group = c.benchmark_group("critical_values");
    group.sample_size(10);
    group.bench_function("zeta_L16_x10", |b| {
        b.iter(|| critical_zetas(2, 4.0, 1.0, &law, 16.0, 8.0, 10, RngSeed::new(4)).unwrap())
    });
    group.finish();
}

fn walk(c: &mut Criterion) {
    let conf = square(1.0, 20.0, 5);
    let net = WalkNetwork::new(&conf, 2.0, (-10.0f64).exp()).unwrap();
    c.bench_function("walk_t100", |b| b.iter(|| net.simulate(0, black_box(100.0), RngSeed::new(6)).unwrap()));
}

criterion_group!(benches, graph_construction, crossings, potential, thresholds, walk);
criterion_main!(benches);
