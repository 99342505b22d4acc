use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use mddsim::{ghz_circuit, random_circuit, run, w_state_circuit, RunOptions};

fn bench_ghz(c: &mut Criterion) {
    let mut group = c.benchmark_group("ghz");
    for n in [16usize, 64, 128] {
        let circuit = ghz_circuit(n, 3).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &circuit, |b, circuit| {
            b.iter(|| run(black_box(circuit), &RunOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_w_state(c: &mut Criterion) {
    let mut group = c.benchmark_group("wstate");
    for n in [16usize, 64, 108] {
        let dims: Vec<usize> = (0..n).map(|i| if i % 13 == 6 { 2 } else { 3 }).collect();
        let circuit = w_state_circuit(&dims).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &circuit, |b, circuit| {
            b.iter(|| run(black_box(circuit), &RunOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_random(c: &mut Criterion) {
    let mut group = c.benchmark_group("random");
    group.sample_size(20);
    for (dims, ops) in [(vec![3usize, 3], 2000usize), (vec![2, 2, 3], 3000)] {
        let circuit = random_circuit(&dims, ops, 1).unwrap();
        let label = format!(
            "{}x{}ops",
            dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","),
            ops
        );
        group.bench_with_input(BenchmarkId::from_parameter(label), &circuit, |b, circuit| {
            b.iter(|| run(black_box(circuit), &RunOptions::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_ghz, bench_w_state, bench_random);
criterion_main!(benches);
