use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use valdyn::green::{grid, grid_seq, GreenParams, Window};
use valdyn::poly::parse_map;

fn green_grid(c: &mut Criterion) {
    let f = parse_map("P = y; Q = y^2 - x").unwrap();
    let prm = GreenParams::new(2.0);
    let win = Window::square(3.0);
    let mut group = c.benchmark_group("green_grid");
    group.sample_size(10);
    for res in [16usize, 48] {
        group.bench_with_input(BenchmarkId::new("parallel", res), &res, |b, &r| {
            b.iter(|| grid(black_box(&f), &win, r, &prm).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", res), &res, |b, &r| {
            b.iter(|| grid_seq(black_box(&f), &win, r, &prm).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, green_grid);
criterion_main!(benches);
