use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qec5_bench::fixture_state;
use qec5_core::channels::NoiseStep;
use qec5_core::{DephasingModel, NoiseConfig};

fn noise(c: &mut Criterion) {
    let rho = fixture_state(2);
    let mut group = c.benchmark_group("noise_step");
    for (name, cfg) in [
        (
            "dephasing",
            NoiseConfig::dephasing_only(1.0, DephasingModel::Independent),
        ),
        ("relaxation", NoiseConfig::relaxation_only(0.5)),
        ("combined", NoiseConfig::default()),
    ] {
        let step = NoiseStep::new(&cfg, 5, 0.01).unwrap();
        group.bench_function(name, |b| b.iter(|| step.apply(black_box(&rho)).unwrap()));
    }
    group.finish();

    c.bench_function("noise_step_build", |b| {
        b.iter(|| NoiseStep::new(black_box(&NoiseConfig::default()), 5, 0.01).unwrap())
    });
}

criterion_group!(benches, noise);
criterion_main!(benches);
