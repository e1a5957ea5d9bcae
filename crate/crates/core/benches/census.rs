//! Census throughput: the library path (rayon when the `parallel` feature is on) against a
//! plain sequential loop over the same enumeration.
//!
//! `cargo bench -p sklab` compares both on a parallel build; with
//! `--no-default-features` the library path is sequential too.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use sklab::enumerate::{s_only, sk, TermSpace};
use sklab::rewrite::census;
use sklab::{run, Limits, Strategy};

fn sequential_census(space: &TermSpace, limits: Limits) -> (u64, u64) {
    let mut terminating = 0;
    let mut steps = 0;
    for t in space.iter() {
        let r = run(&t, Strategy::LEFTMOST_OUTERMOST, limits);
        if r.outcome.is_fixed_point() {
            terminating += 1;
            steps += r.steps;
        }
    }
    (terminating, steps)
}

fn bench_census(c: &mut Criterion) {
    let mode = if sklab::par::is_parallel() { "rayon" } else { "library-sequential" };
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    let cases = [("sk", 6, sk(), Limits::steps(200)), ("s", 9, s_only(), Limits::steps(2000))];
    for (name, size, alphabet, limits) in cases {
        let space = TermSpace::new(size, &alphabet).unwrap();
        let id = format!("{name}{size}");
        group.bench_with_input(BenchmarkId::new(mode, &id), &space, |b, space| {
            b.iter(|| black_box(census(space, Strategy::LEFTMOST_OUTERMOST, limits).terminating))
        });
        group.bench_with_input(BenchmarkId::new("sequential", &id), &space, |b, space| {
            b.iter(|| black_box(sequential_census(space, limits)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_census);
criterion_main!(benches);
