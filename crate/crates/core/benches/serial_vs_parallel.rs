use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bowstate::atom_dielectric::{coherence_map, AtomDielectricScenario};
use bowstate::diagnostics::{energy_profile, EnergyGrid};
use bowstate::kernel::{assemble_log_kernel, reconstruct_field, FoldMode, TailFit};
use bowstate::{Execution, QuadratureSpec, StringModel, TauGrid, TrajectorySolution};

const MODES: [(&str, Execution); 2] = [
    ("serial", Execution::Serial),
    ("parallel", Execution::Parallel),
];

fn kernel_assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("log_kernel_assembly");
    for n in [500, 1000] {
        let grid = TauGrid::graded(n, 50.0, 2.0).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &grid, |b, g| {
                b.iter(|| {
                    assemble_log_kernel(
                        black_box(g),
                        Some(TailFit::default()),
                        FoldMode::Folded,
                        exec,
                    )
                    .unwrap()
                })
            });
        }
    }
    group.finish();
}

fn trajectory() -> TrajectorySolution {
    let grid = TauGrid::graded(500, 50.0, 2.0).unwrap();
    TrajectorySolution::analytic(
        &StringModel::unit(),
        &grid,
        &QuadratureSpec::default(),
        Execution::Serial,
    )
    .unwrap()
}

fn field_reconstruction(c: &mut Criterion) {
    let traj = trajectory();
    let ys: Vec<f64> = (0..41).map(|k| 0.5 * k as f64).collect();
    let taus = [0.0, 3.0, 10.0];
    let mut group = c.benchmark_group("field_reconstruction");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| reconstruct_field(&traj, black_box(&ys), &taus, exec).unwrap())
        });
    }
    group.finish();
}

fn energy_quadrature(c: &mut Criterion) {
    let traj = trajectory();
    let heights = EnergyGrid::default();
    let mut group = c.benchmark_group("energy_profile");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| energy_profile(&traj, black_box(&[0.0, 5.0]), &heights, exec).unwrap())
        });
    }
    group.finish();
}

fn regime_sweep(c: &mut Criterion) {
    let base = AtomDielectricScenario::preset(10.0);
    let mut group = c.benchmark_group("coherence_map");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| coherence_map(black_box(&base), 0.5, 8.0, 200, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10).measurement_time(Duration::from_secs(3));
    targets = kernel_assembly, field_reconstruction, energy_quadrature, regime_sweep
}
criterion_main!(benches);
