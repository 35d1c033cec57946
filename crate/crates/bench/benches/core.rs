// SPDX-License-Identifier: Apache-2.0

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;

use quadclass::arith::factorize;
use quadclass::quadfield::{count_reduced_forms, prime_form_above, reduced_forms};
use quadclass::{squarefree_decompose, verify, Budgets, TheoremId};

fn class_numbers(c: &mut Criterion) {
    let mut group = c.benchmark_group("class_number");
    for disc in [-6347i128, -1_000_003, -100_000_007, -10_000_000_019] {
        group.bench_with_input(BenchmarkId::from_parameter(disc), &disc, |b, &disc| {
            b.iter(|| count_reduced_forms(black_box(disc)).unwrap())
        });
    }
    group.finish();
}

fn composition(c: &mut Criterion) {
    let disc = -1_000_003;
    let forms = reduced_forms(disc).unwrap();
    let f = forms[forms.len() / 3];
    let g = forms[forms.len() / 2];
    c.bench_function("compose", |b| {
        b.iter(|| black_box(f).compose(black_box(&g)).unwrap())
    });
    // First prime that splits in this discriminant.
    let p = [3, 5, 7, 11, 13, 17, 19, 23]
        .into_iter()
        .find_map(|p| prime_form_above(p, disc).ok())
        .expect("a small split prime");
    c.bench_function("order_of_prime_form", |b| b.iter(|| black_box(p).order()));
}

fn factorization(c: &mut Criterion) {
    let mut group = c.benchmark_group("factorize");
    let inputs = [
        ("1-4*13^8", BigInt::from(1) - BigInt::from(13).pow(8) * 4),
        (
            "semiprime_2^61",
            BigInt::from(2_305_843_009_213_693_951u64) * 1_000_000_007u64,
        ),
        ("1-4*29^12", BigInt::from(1) - BigInt::from(29).pow(12) * 4),
    ];
    for (name, n) in &inputs {
        group.bench_with_input(BenchmarkId::from_parameter(name), n, |b, n| {
            b.iter(|| factorize(black_box(n)).unwrap())
        });
    }
    group.bench_function("squarefree_decompose", |b| {
        b.iter(|| squarefree_decompose(black_box(&inputs[0].1)).unwrap())
    });
    group.finish();
}

fn verdicts(c: &mut Criterion) {
    let budgets = Budgets::default();
    c.bench_function("verify_t5_13_8", |b| {
        b.iter(|| verify(TheoremId::T5, black_box(&[13, 8]), &budgets))
    });
    c.bench_function("verify_t6_5_6_3", |b| {
        b.iter(|| verify(TheoremId::T6, black_box(&[5, 6, 3]), &budgets))
    });
}

criterion_group!(benches, class_numbers, composition, factorization, verdicts);
criterion_main!(benches);
