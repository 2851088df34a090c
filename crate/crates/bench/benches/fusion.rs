use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pmit_bench::{depolarized_circuit, spl_circuit};
use pmit_core::pec::{build_global_inverse, gamma_triple, FusionMode, GlobalInverseOptions};
use std::hint::black_box;

fn exact_fusion(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact_fusion_depolarizing_5q");
    let opts = GlobalInverseOptions { mode: FusionMode::Exact, ..GlobalInverseOptions::default() };
    for depth in [4, 16] {
        let (circuit, noise) = depolarized_circuit(5, depth, 0.02, 5);
        g.bench_with_input(BenchmarkId::from_parameter(depth), &depth, |b, _| {
            b.iter(|| black_box(build_global_inverse(&circuit, &noise, &opts).unwrap().gamma))
        });
    }
    g.finish();
}

fn product_fusion(c: &mut Criterion) {
    let mut g = c.benchmark_group("product_fusion_spl_10q");
    g.sample_size(10);
    for budget in [0, 200] {
        let (circuit, noise) = spl_circuit(10, 12, 0.996, 6);
        let opts = GlobalInverseOptions { mode: FusionMode::Product, expansion_budget: budget, ..GlobalInverseOptions::default() };
        g.bench_with_input(BenchmarkId::from_parameter(budget), &budget, |b, _| {
            b.iter(|| black_box(gamma_triple(&circuit, &noise, &opts).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, exact_fusion, product_fusion);
criterion_main!(benches);
