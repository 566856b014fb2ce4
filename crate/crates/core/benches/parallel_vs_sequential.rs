use std::hint::black_box;
use std::time::Duration;

use bihv_core::catalog::Corpus;
use bihv_core::elimination::{eliminate, EliminationOptions, PrsMode};
use bihv_core::odesim::{integrate_many, ClosedFormFamily, IntegrateOptions, Job};
use bihv_core::rings::Ring;
use bihv_core::{Exec, Polynomial};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn inputs() -> (Polynomial, Polynomial) {
    let corpus = Corpus::builtin();
    let ring = Ring::lambda();
    (
        corpus.expected_one("taup4", &ring).unwrap(),
        corpus.expected_one("taup3", &ring).unwrap(),
    )
}

fn multiplication(c: &mut Criterion) {
    let (f4, f3) = inputs();
    let opts = EliminationOptions {
        mode: PrsMode::Primitive,
        exec: Exec::default(),
    };
    let steps = eliminate(&f4, &f3, "tau", &opts).unwrap().steps;
    let (a, b) = (&steps[0].remainder, &steps[1].remainder);
    let mut g = c.benchmark_group("multiply f2*f1");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bench, &exec| {
            bench.iter(|| black_box(a.try_mul_with(b, exec).unwrap()))
        });
    }
    g.finish();
}

fn elimination(c: &mut Criterion) {
    let (f4, f3) = inputs();
    let mut g = c.benchmark_group("eliminate tau");
    g.sample_size(10).measurement_time(Duration::from_secs(15));
    for (name, exec) in MODES {
        let opts = EliminationOptions {
            mode: PrsMode::Primitive,
            exec,
        };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |bench, opts| {
            bench.iter(|| black_box(eliminate(&f4, &f3, "tau", opts).unwrap()))
        });
    }
    g.finish();
}

fn family_sweep(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let jobs: Vec<Job> = (0..64)
        .map(|i| {
            let f = ClosedFormFamily::sample(0, 1 + i % 4, (0.0, 1.0), &mut rng).unwrap();
            Job {
                spec: f.spec(),
                init: f.state(1.0).unwrap(),
                t0: 1.0,
                t1: 2.0,
            }
        })
        .collect();
    let opts = IntegrateOptions::with_tol(1e-10);
    let mut g = c.benchmark_group("family sweep (64 trajectories)");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bench, &exec| {
            bench.iter(|| black_box(integrate_many(&jobs, &opts, exec)))
        });
    }
    g.finish();
}

criterion_group!(benches, multiplication, elimination, family_sweep);
criterion_main!(benches);
