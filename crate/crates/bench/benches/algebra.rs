use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pmit_bench::{random_paulis, spl_circuit};
use pmit_core::clifford::propagate;
use std::hint::black_box;

fn pauli_products(c: &mut Criterion) {
    let mut g = c.benchmark_group("pauli_product");
    for n in [8, 64, 512] {
        let ps = random_paulis(n, 256, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &ps, |b, ps| {
            b.iter(|| ps.windows(2).map(|w| w[0].mul_with_phase(&w[1]).1 as u32).sum::<u32>())
        });
    }
    g.finish();
}

fn commutation(c: &mut Criterion) {
    let ps = random_paulis(128, 256, 2);
    c.bench_function("commutes_128q", |b| b.iter(|| ps.windows(2).filter(|w| w[0].commutes_unchecked(&w[1])).count()));
}

fn propagation(c: &mut Criterion) {
    let mut g = c.benchmark_group("propagate_to_start");
    for depth in [8, 32] {
        let (circuit, _) = spl_circuit(20, depth, 0.996, 3);
        let ps = random_paulis(20, 32, 4);
        g.bench_with_input(BenchmarkId::from_parameter(depth), &depth, |b, _| {
            b.iter(|| {
                for p in &ps {
                    black_box(propagate(p, &circuit, circuit.layers.len(), 0).unwrap());
                }
            })
        });
    }
    g.finish();
}

criterion_group!(benches, pauli_products, commutation, propagation);
criterion_main!(benches);
