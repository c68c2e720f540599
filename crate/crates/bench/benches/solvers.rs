use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use oncograph::cohort::{coexisting_mutation_sets, group_by_threshold, GroupingMode, Metric};
use oncograph::hitting_set::{solve_min_cardinality, solve_min_weight};
use oncograph::Rational;
use oncograph_bench::{hitting_set_instance, profiles};
use std::hint::black_box;

fn hitting_set(c: &mut Criterion) {
    let mut group = c.benchmark_group("hitting_set");
    for &(drugs, sets) in &[(12, 8), (30, 15), (60, 25)] {
        let inst = hitting_set_instance(1, drugs, sets, 4);
        let id = format!("{drugs}x{sets}");
        group.bench_with_input(BenchmarkId::new("cardinality", &id), &inst, |b, i| {
            b.iter(|| solve_min_cardinality(black_box(i)))
        });
        group.bench_with_input(BenchmarkId::new("weight", &id), &inst, |b, i| b.iter(|| solve_min_weight(black_box(i))));
    }
    group.finish();
}

fn itemsets(c: &mut Criterion) {
    let mut group = c.benchmark_group("coexisting_sets");
    for &(patients, k) in &[(200, 20), (2000, 10), (2000, 5)] {
        let ps = profiles(2, patients, 40);
        let k = Rational::from_integer(k);
        group.bench_with_input(BenchmarkId::new(patients.to_string(), k), &ps, |b, ps| {
            b.iter(|| coexisting_mutation_sets(black_box(ps), k).unwrap())
        });
    }
    group.finish();
}

fn grouping(c: &mut Criterion) {
    let mut group = c.benchmark_group("grouping");
    group.sample_size(20);
    for &patients in &[200, 1000] {
        let ps = profiles(3, patients, 40);
        group.bench_with_input(BenchmarkId::new("hamming_components", patients), &ps, |b, ps| {
            b.iter(|| group_by_threshold(black_box(ps), Metric::Hamming, Rational::from_integer(2), GroupingMode::Components))
        });
        group.bench_with_input(BenchmarkId::new("jaccard_components", patients), &ps, |b, ps| {
            b.iter(|| group_by_threshold(black_box(ps), Metric::Jaccard, Rational::new(1, 4), GroupingMode::Components))
        });
    }
    let ps = profiles(4, 200, 40);
    group.bench_function("hamming_cliques/200", |b| {
        b.iter(|| group_by_threshold(black_box(&ps), Metric::Hamming, Rational::from_integer(1), GroupingMode::Cliques))
    });
    group.finish();
}

criterion_group!(benches, hitting_set, itemsets, grouping);
criterion_main!(benches);
