use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use exactform::exact::{solve_basic, solve_standard};
use exactform::fuzz::{run_trials, run_trials_sequential, FuzzConfig};
use exactform::parse_form;

const WORKED: &str = "(e^x*sin(y)*cos(z) - 2*y*sin(x)*e^z) dx \
    + (e^x*cos(y)*cos(z) + 2*cos(x)*e^z + 1/(y*z)) dy \
    + (2*y*cos(x)*e^z - e^x*sin(y)*sin(z) - ln(y)/z^2) dz";

fn trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("round_trip_trials");
    group.sample_size(10);
    for trials in [16u64, 64] {
        let cfg = FuzzConfig::new(1, trials, 2, 5, 8).unwrap();
        group.bench_with_input(BenchmarkId::new("parallel", trials), &cfg, |b, cfg| b.iter(|| run_trials(cfg)));
        group.bench_with_input(BenchmarkId::new("sequential", trials), &cfg, |b, cfg| {
            b.iter(|| run_trials_sequential(cfg))
        });
    }
    group.finish();
}

fn solvers(c: &mut Criterion) {
    let form = parse_form(WORKED).unwrap();
    let mut group = c.benchmark_group("worked_example");
    group.bench_function("basic", |b| b.iter(|| solve_basic(&form).unwrap()));
    group.bench_function("standard", |b| b.iter(|| solve_standard(&form).unwrap()));
    group.finish();
}

criterion_group!(benches, trials, solvers);
criterion_main!(benches);
