use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jfy_core::branch::BranchEvaluation;
use jfy_core::fuzz::{self, FuzzConfig};
use jfy_core::par::Exec;
use jfy_core::program;
use jfy_core::semantics;

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn fuzzing(c: &mut Criterion) {
    let config = FuzzConfig {
        seed: 1,
        count: 32,
        ..FuzzConfig::default()
    };
    let mut group = c.benchmark_group("fuzz_check");
    group.sample_size(10);
    for (name, exec) in EXECS {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| fuzz::fuzz_check(black_box(&config), exec))
        });
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    // ten atoms in five even loops: 1024 candidates, 32 stable models
    let text: String = (0..5)
        .map(|i| format!("a{i} :- not b{i}. b{i} :- not a{i}. a{i} :- a{}.\n", (i + 1) % 5))
        .collect();
    let (_, frame) = program::load(&text, &Default::default()).unwrap();
    let mut group = c.benchmark_group("stable_models");
    group.sample_size(10);
    for (name, exec) in EXECS {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| semantics::models(black_box(&frame), BranchEvaluation::Stable, &Default::default(), exec))
        });
    }
    group.finish();
}

criterion_group!(benches, fuzzing, enumeration);
criterion_main!(benches);
