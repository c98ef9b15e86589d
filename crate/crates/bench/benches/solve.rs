use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use codelim::{
    assign_canonical, fringe_solve, solve, solve_linear_space, CodingProblem, FringeProblem,
    LengthBounds, Penalty, Radix,
};
use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn weights(n: usize, seed: u64) -> Vec<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| BigRational::from(BigInt::from(rng.gen_range(1..=1000i64))))
        .collect()
}

fn problem(n: usize, span: u32) -> CodingProblem {
    let w = weights(n, n as u64);
    let mut l_min = 0u32;
    while 2u64.saturating_pow(l_min + span) < n as u64 {
        l_min += 1;
    }
    CodingProblem::new(
        &w,
        Radix::new(2).unwrap(),
        LengthBounds::new(l_min, l_min + span).unwrap(),
        Penalty::Linear,
    )
    .unwrap()
}

fn bench_solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("bounded_solve");
    group.sample_size(10);
    for &n in &[1_000usize, 10_000] {
        let p = problem(n, 12);
        group.bench_with_input(BenchmarkId::new("full", n), &p, |b, p| {
            b.iter(|| black_box(solve(p).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("linear_space", n), &p, |b, p| {
            b.iter(|| black_box(solve_linear_space(p).unwrap()))
        });
    }
    group.finish();
}

fn bench_fringe(c: &mut Criterion) {
    let mut group = c.benchmark_group("fringe_sweep");
    group.sample_size(10);
    for &d in &[4u32, 8] {
        let w = weights(2_000, 7);
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| {
            let problem = FringeProblem {
                weights: w.clone(),
                radix: Radix::new(2).unwrap(),
                max_fringe: d,
                penalty: Penalty::Linear,
                extra_dummy_blocks: 0,
            };
            b.iter(|| black_box(fringe_solve(&problem).unwrap()))
        });
    }
    group.finish();
}

fn bench_canonical(c: &mut Criterion) {
    let p = problem(10_000, 14);
    let lengths = solve_linear_space(&p).unwrap().lengths;
    c.bench_function("assign_canonical_10k", |b| {
        b.iter(|| black_box(assign_canonical(&lengths, Radix::new(2).unwrap()).unwrap()))
    });
}

criterion_group!(benches, bench_solvers, bench_fringe, bench_canonical);
criterion_main!(benches);
