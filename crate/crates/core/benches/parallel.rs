use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use nhqm::cli::{self, Command, Overrides, RunConfig};
use nhqm::exec::Execution;
use nhqm::suite::{biortho_suite, hermitization_suite};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("random_suites");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("biortho_200", name), &exec, |b, &exec| {
            b.iter(|| biortho_suite(black_box(7), 200, 16, exec))
        });
        group.bench_with_input(BenchmarkId::new("hermitize_200", name), &exec, |b, &exec| {
            b.iter(|| hermitization_suite(black_box(7), 200, 16, exec))
        });
    }
    group.finish();
}

fn examples(c: &mut Criterion) {
    let mut group = c.benchmark_group("examples");
    group.sample_size(10);
    let ex1 = RunConfig::defaults(Command::Example1);
    let ex3 = RunConfig::resolve(
        Command::Example3,
        Overrides {
            t_end: Some(1.0),
            ..Default::default()
        },
    )
    .expect("valid overrides");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("cubic_sweep", name), &exec, |b, &exec| {
            b.iter(|| cli::example1(&ex1, exec).expect("example runs"))
        });
        group.bench_with_input(BenchmarkId::new("three_frames_t1", name), &exec, |b, &exec| {
            b.iter(|| cli::example3(&ex3, exec).expect("example runs"))
        });
    }
    group.finish();
}

criterion_group!(benches, suites, examples);
criterion_main!(benches);
