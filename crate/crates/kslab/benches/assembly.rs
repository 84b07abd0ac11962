//! Criterion benchmarks comparing the data-parallel assembly against the
//! sequential fallback, plus the dense eigensolve that consumes the
//! matrices.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::f64::consts::FRAC_PI_4;

use kslab::geometry::make_wedge;
use kslab::mesh::{assemble_ks, assemble_ks_sequential, build_mesh, MeshParams, SharedMesh};
use kslab::spectra::eigs_skew;

fn wedge_mesh(panels: usize, levels: usize) -> SharedMesh {
    let b = make_wedge(FRAC_PI_4).unwrap();
    let params =
        MeshParams { panels_per_arc: panels, order: 12, grading_levels: levels, grading_ratio: 0.5 };
    build_mesh(&b, &params).unwrap()
}

fn bench_assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("assemble_ks");
    group.sample_size(10);
    for (panels, levels) in [(8usize, 12usize), (24, 24)] {
        let mesh = wedge_mesh(panels, levels);
        let n = mesh.len();
        group.bench_with_input(BenchmarkId::new("sequential", n), &mesh, |b, m| {
            b.iter(|| assemble_ks_sequential(m).unwrap())
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("rayon", n), &mesh, |b, m| {
            b.iter(|| assemble_ks(m).unwrap())
        });
    }
    group.finish();
}

fn bench_eigensolve(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigs_skew");
    group.sample_size(10);
    let mesh = wedge_mesh(8, 12);
    let a = assemble_ks(&mesh).unwrap();
    group.bench_function(BenchmarkId::from_parameter(mesh.len()), |b| {
        b.iter(|| eigs_skew(&a).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_assembly, bench_eigensolve);
criterion_main!(benches);
