use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nalgebra::Vector3;
use spin1_epr::bell::{maximize_violation_with, MaximizeOptions};
use spin1_epr::correlations::{cmf_probabilities, probabilities_general};
use spin1_epr::observables::{nmt_closed_form, nmt_definitional, probability_oracle};
use spin1_epr::states::scalar_state;
use spin1_epr::{CmfConfig, Direction, FourMomentum, Inequality};

fn inputs() -> (FourMomentum, FourMomentum, Direction, Direction) {
    (
        FourMomentum::on_shell(Vector3::new(0.4, -1.1, 0.7)),
        FourMomentum::on_shell(Vector3::new(-0.8, 0.2, 1.5)),
        Direction::normalize(Vector3::new(0.3, 0.9, -0.2)).unwrap(),
        Direction::normalize(Vector3::new(-0.6, 0.1, 0.8)).unwrap(),
    )
}

fn nmt(c: &mut Criterion) {
    let (k, _, a, _) = inputs();
    c.bench_function("nmt_closed_form", |bench| {
        bench.iter(|| nmt_closed_form(black_box(&k), black_box(&a)))
    });
    c.bench_function("nmt_definitional", |bench| {
        bench.iter(|| nmt_definitional(black_box(&k), black_box(&a)))
    });
}

fn probabilities(c: &mut Criterion) {
    let (k, p, a, b) = inputs();
    let psi = scalar_state(&k, &p);
    c.bench_function("probabilities_general", |bench| {
        bench.iter(|| probabilities_general(black_box(&k), black_box(&p), black_box(&a), black_box(&b)))
    });
    c.bench_function("probability_oracle", |bench| {
        bench.iter(|| probability_oracle(black_box(&psi), black_box(&a), black_box(&b)))
    });
    let cfg = CmfConfig::new(0.3, -0.5, 0.5, 0.5).unwrap();
    c.bench_function("cmf_probabilities", |bench| {
        bench.iter(|| cmf_probabilities(black_box(&cfg)))
    });
}

fn optimizer(c: &mut Criterion) {
    let opts = MaximizeOptions {
        starts: 4,
        ..Default::default()
    };
    let mut group = c.benchmark_group("maximize");
    group.sample_size(10);
    group.bench_function("mermin_4_starts", |bench| {
        bench.iter(|| maximize_violation_with(Inequality::Mermin, None, black_box(3), &opts))
    });
    group.finish();
}

criterion_group!(benches, nmt, probabilities, optimizer);
criterion_main!(benches);
