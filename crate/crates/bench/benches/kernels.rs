use criterion::{black_box, criterion_group, criterion_main, Criterion};
use starshell::bessel::bessel_k;
use starshell::solver::{deficiency_indices, find_eigenvalues, SolverOptions};
use starshell::transfer::{monodromy, secular_det_oracle};
use starshell::unitary::{build_vertex_unitary, eigenphases};
use starshell::StarGraph;

fn bench_monodromy(c: &mut Criterion) {
    let g = StarGraph::symmetric(6, vec![1.0, -1.0, 1.0, 1.0, -1.0, 1.0]).unwrap();
    c.bench_function("monodromy_n6", |b| {
        b.iter(|| monodromy(&g, black_box(-0.3)).secular)
    });
    c.bench_function("det_oracle_n6", |b| {
        b.iter(|| secular_det_oracle(&g, black_box(-0.3)))
    });
}

fn bench_solver(c: &mut Criterion) {
    let g = StarGraph::symmetric(3, vec![4.0; 3]).unwrap();
    let opts = SolverOptions::default();
    c.bench_function("deficiency_n3", |b| b.iter(|| deficiency_indices(&g, &opts).unwrap()));
    let g6 = StarGraph::symmetric(6, vec![1.0, -1.0, 1.0, 1.0, -1.0, 1.0]).unwrap();
    c.bench_function("spectrum_window_n6", |b| {
        b.iter(|| find_eigenvalues(&g6, -0.5, 0.5, &opts).unwrap().total_with_multiplicity)
    });
}

fn bench_eigenphases(c: &mut Criterion) {
    let g = StarGraph::symmetric(6, vec![1.0, -1.0, 1.0, 1.0, -1.0, 1.0]).unwrap();
    let vu = build_vertex_unitary(&g);
    c.bench_function("eigenphases_n6", |b| b.iter(|| eigenphases(&vu).unwrap().len()));
}

fn bench_bessel(c: &mut Criterion) {
    c.bench_function("bessel_k_series", |b| {
        b.iter(|| bessel_k(black_box(0.3), black_box(0.8)).unwrap())
    });
    c.bench_function("bessel_k_integral", |b| {
        b.iter(|| bessel_k(black_box(0.3), black_box(5.0)).unwrap())
    });
}

criterion_group!(benches, bench_monodromy, bench_solver, bench_eigenphases, bench_bessel);
criterion_main!(benches);
