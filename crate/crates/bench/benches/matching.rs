use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use regmatch_bench::{fixture, DENSE_SIZES};
use regmatch_core::matcher::{euler_split_matching, hopcroft_karp, match_by_sampling};
use regmatch_core::sampler::upper_bound_rate;

fn matching(c: &mut Criterion) {
    let mut group = c.benchmark_group("perfect_matching");
    group.sample_size(10);
    for &(n, d) in DENSE_SIZES {
        let g = fixture(n, d);
        let m = g.edge_count() as u64;
        group.bench_with_input(BenchmarkId::new("hopcroft_karp", m), &g, |b, g| {
            b.iter(|| hopcroft_karp(black_box(g)))
        });
        let p0 = upper_bound_rate(n, d, 1.0);
        let mut seed = 0u64;
        group.bench_with_input(BenchmarkId::new("sampled_c1", m), &g, |b, g| {
            b.iter(|| {
                seed += 1;
                match_by_sampling(black_box(g), p0, seed).unwrap()
            })
        });
        group.bench_with_input(BenchmarkId::new("euler_split", m), &g, |b, g| {
            b.iter(|| euler_split_matching(black_box(g)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, matching);
criterion_main!(benches);
