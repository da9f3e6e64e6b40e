use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use trikernel::cycles::{check_circuit_hypothesis, check_cycle_hypothesis, enumerate_cycles};
use trikernel::generators::{random_digraph, random_strongly_connected};
use trikernel::harness::{run_campaign, CampaignConfig, PropertyId};
use trikernel::kernels::{find_kernel_via_closure, find_kl_kernel, is_3_kernel_perfect, k_closure, KernelQuery};
use trikernel::substitution::run_substitution_method;
use trikernel::{CycleCondition, Digraph};

fn kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("three_kernel");
    for n in [8, 12, 16] {
        let d = random_strongly_connected(n, 0.15, 7).unwrap();
        group.bench_with_input(BenchmarkId::new("direct", n), &d, |b, d| {
            b.iter(|| find_kl_kernel(black_box(d), KernelQuery::THREE_KERNEL).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("via_closure", n), &d, |b, d| {
            b.iter(|| find_kernel_via_closure(black_box(d), 3).unwrap())
        });
    }
    group.finish();

    let d = random_strongly_connected(8, 0.1, 3).unwrap();
    c.bench_function("three_kernel_perfect/8", |b| b.iter(|| is_3_kernel_perfect(black_box(&d)).unwrap()));
}

fn closures(c: &mut Criterion) {
    let mut group = c.benchmark_group("closure");
    for n in [16, 64, 128] {
        let d = random_digraph(n, 4.0 / n as f64, 1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| {
            // Rebuild so the cached distance matrix is not reused.
            b.iter(|| k_closure(&Digraph::new(d.vertex_count(), d.arcs().to_vec()).unwrap(), 2).unwrap())
        });
    }
    group.finish();
}

fn cycles(c: &mut Criterion) {
    let mut group = c.benchmark_group("cycles");
    for n in [6, 8] {
        let d = random_strongly_connected(n, 0.3, 5).unwrap();
        group.bench_with_input(BenchmarkId::new("enumerate", n), &d, |b, d| {
            b.iter(|| enumerate_cycles(black_box(d), 2, n).len())
        });
        group.bench_with_input(BenchmarkId::new("crossing_condition", n), &d, |b, d| {
            b.iter(|| check_cycle_hypothesis(black_box(d), CycleCondition::ThreeWithCrossing, 3))
        });
    }
    let d = random_strongly_connected(7, 0.15, 2).unwrap();
    group.bench_function("circuit_condition/7", |b| {
        b.iter(|| check_circuit_hypothesis(black_box(&d), d.arc_count(), 2).unwrap())
    });
    group.finish();
}

fn substitution(c: &mut Criterion) {
    let c6 = Digraph::cycle(6);
    c.bench_function("substitution/c6", |b| b.iter(|| run_substitution_method(black_box(&c6), 0).unwrap()));
    let d = (0..)
        .map(|seed| random_strongly_connected(10, 0.15, seed).unwrap())
        .find(|d| run_substitution_method(d, 0).is_ok())
        .unwrap();
    c.bench_function("substitution/10", |b| b.iter(|| run_substitution_method(black_box(&d), 0).unwrap()));
}

fn campaigns(c: &mut Criterion) {
    let mut group = c.benchmark_group("campaign");
    group.sample_size(10);
    let cfg = CampaignConfig::new(PropertyId::Theorem2, 6).trials(200).seed(4);
    group.bench_function("theorem2/6x200", |b| b.iter(|| run_campaign(&cfg).unwrap()));
    let cfg = CampaignConfig::new(PropertyId::Roads, 7).trials(100).seed(7);
    group.bench_function("roads/7x100", |b| b.iter(|| run_campaign(&cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, kernels, closures, cycles, substitution, campaigns);
criterion_main!(benches);
