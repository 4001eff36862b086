use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use coherence_lab::gluings::SpGluing;
use coherence_lab::interferometer::{build_sp_dilation, phase_scan};
use coherence_lab::measures::{
    coherence_sp, coherent_fidelity_lsp, coherent_fidelity_sp, search_shifts, GluingClass,
    SearchConfig,
};
use coherence_lab::numerics::{seeded_rng, svd};
use coherence_lab::states::{random_density, PureState};

fn closed_forms(c: &mut Criterion) {
    let mut group = c.benchmark_group("closed_forms");
    for dim in [2, 4, 8] {
        let a = random_density(dim, dim, 1).unwrap();
        let b = random_density(dim, dim / 2, 2).unwrap();
        group.bench_with_input(BenchmarkId::new("f_lsp", dim), &dim, |bench, _| {
            bench.iter(|| coherent_fidelity_lsp(black_box(&a), black_box(&b)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("f_sp", dim), &dim, |bench, _| {
            bench.iter(|| coherent_fidelity_sp(black_box(&a), black_box(&b)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("g_sp", dim), &dim, |bench, _| {
            bench.iter(|| coherence_sp(black_box(&a), black_box(&b)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("svd", dim), &dim, |bench, _| {
            bench.iter(|| svd(black_box(a.matrix())))
        });
    }
    group.finish();
}

fn shift_search(c: &mut Criterion) {
    let a = random_density(3, 3, 3).unwrap();
    let b = random_density(3, 2, 4).unwrap();
    let search = SearchConfig {
        samples: 1000,
        seed: 5,
    };
    c.bench_function("search_shifts_sp_1000", |bench| {
        bench.iter(|| search_shifts(black_box(&a), black_box(&b), GluingClass::Sp, &search))
    });
}

fn interferometer(c: &mut Criterion) {
    let mut rng = seeded_rng(6);
    let g = SpGluing::random(3, 3, 3, &mut rng);
    let psi = PureState::random(3, &mut rng);
    let dilation = build_sp_dilation(&g).unwrap();
    c.bench_function("build_sp_dilation_d3", |bench| {
        bench.iter(|| build_sp_dilation(black_box(&g)).unwrap())
    });
    c.bench_function("phase_scan_d3", |bench| {
        bench.iter(|| phase_scan(black_box(&dilation), &psi, None).unwrap())
    });
}

criterion_group!(benches, closed_forms, shift_search, interferometer);
criterion_main!(benches);
