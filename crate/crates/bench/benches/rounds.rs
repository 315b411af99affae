use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qround_bench::Workload;
use qround_core::generators::SetMode;
use qround_core::opt::{opt1_bruteforce, opt1_minimum, DEFAULT_CAP};
use qround_core::ProblemKind;

fn minimum_algorithms(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimum");
    let shared = Workload::fig3(5, 4);
    let disjoint = Workload::random(7, 200, 12, 8, SetMode::Disjoint, ProblemKind::Minimum);
    let overlap = Workload::random(7, 200, 12, 8, SetMode::Overlap, ProblemKind::Minimum);
    for alg in ["bal", "bal-rr", "budget"] {
        for w in [&shared, &disjoint, &overlap] {
            group.bench_with_input(BenchmarkId::new(alg, &w.name), w, |b, w| {
                b.iter(|| black_box(w.rounds(alg)))
            });
        }
    }
    group.finish();
}

fn sorting_and_selection(c: &mut Criterion) {
    let mut group = c.benchmark_group("other");
    let sorting = Workload::random(3, 14, 1, 3, SetMode::Single, ProblemKind::Sorting);
    group.bench_function("sorting-vc", |b| b.iter(|| black_box(sorting.rounds("sorting-vc"))));
    let sel = Workload::random(3, 200, 1, 8, SetMode::Single, ProblemKind::SelectionFull { rank: 70 });
    group.bench_function("sel-full", |b| b.iter(|| black_box(sel.rounds("sel-full"))));
    group.finish();
}

fn optimum(c: &mut Criterion) {
    let mut group = c.benchmark_group("opt1");
    let w = Workload::random(5, 16, 3, 2, SetMode::Overlap, ProblemKind::Minimum);
    group.bench_function("closed-form", |b| {
        b.iter(|| black_box(opt1_minimum(&w.instance, &w.realization)))
    });
    group.bench_function("brute-force", |b| {
        b.iter(|| black_box(opt1_bruteforce(&w.instance, &w.realization, DEFAULT_CAP)))
    });
    group.finish();
}

criterion_group!(benches, minimum_algorithms, sorting_and_selection, optimum);
criterion_main!(benches);
