use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use mumford_core::autgrp::{full_group, structure_check, DEFAULT_GROUP_BUDGET};
use mumford_core::curve::{count_affine, CountMethod, DEFAULT_COUNT_BUDGET};
use mumford_core::grouplab::lemma_check;
use mumford_core::schottky::{freeness_check, SchottkyData};
use mumford_core::CurveParams;

fn point_counts(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_affine");
    for (p, t, m) in [(2u64, 2usize, 8usize), (3, 1, 12), (2, 1, 20)] {
        let params = CurveParams::from_literal(p, t, "1").unwrap();
        group.bench_with_input(BenchmarkId::new("trace", format!("q{}^{m}", params.q())), &m, |b, &m| {
            b.iter(|| count_affine(&params, black_box(m), CountMethod::Trace, DEFAULT_COUNT_BUDGET).unwrap())
        });
    }
    let params = CurveParams::from_literal(3, 1, "1").unwrap();
    group.bench_function("naive/q3^4", |b| {
        b.iter(|| count_affine(&params, black_box(4), CountMethod::Naive, DEFAULT_COUNT_BUDGET).unwrap())
    });
    group.finish();
}

fn automorphism_groups(c: &mut Criterion) {
    let mut group = c.benchmark_group("autgrp");
    group.sample_size(20);
    for (p, t) in [(2u64, 2usize), (3, 2)] {
        group.bench_function(format!("full_group/({p},{t})"), |b| {
            b.iter(|| full_group(black_box(p), t, DEFAULT_GROUP_BUDGET).unwrap())
        });
    }
    let g = full_group(2, 2, DEFAULT_GROUP_BUDGET).unwrap();
    group.bench_function("structure_check/(2,2)", |b| b.iter(|| structure_check(&g).unwrap()));
    group.finish();
}

fn schottky_words(c: &mut Criterion) {
    let mut group = c.benchmark_group("freeness");
    group.sample_size(10);
    for (p, t, len) in [(2u64, 1usize, 12usize), (3, 1, 5), (2, 2, 4)] {
        let data = SchottkyData::build_from_literal(p, t, "T^-1").unwrap();
        group.bench_function(format!("q{}/L{len}", data.q), |b| {
            b.iter(|| freeness_check(&data, black_box(len), 1_000_000).unwrap())
        });
    }
    group.finish();
}

fn lemma(c: &mut Criterion) {
    let mut group = c.benchmark_group("lemma_check");
    group.sample_size(10);
    for q in [2u64, 3, 4] {
        group.bench_function(format!("q{q}"), |b| b.iter(|| lemma_check(black_box(q)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, point_counts, automorphism_groups, schottky_words, lemma);
criterion_main!(benches);
