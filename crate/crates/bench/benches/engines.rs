use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigUint;
use num_rational::BigRational;

use qhash_core::bounds::{rate_from_inner, Provenance};
use qhash_core::codes::{sum_code, CodeSpec};
use qhash_core::mappings::complete_mapping_count;
use qhash_core::real::Real;
use qhash_core::separation::{count_separated_bruteforce, count_separated_ix};
use qhash_core::{GroupSpec, Limits};

fn complete_mappings(c: &mut Criterion) {
    let limits = Limits::default();
    for g in ["z9", "gf9", "z11"] {
        let spec: GroupSpec = g.parse().unwrap();
        c.bench_function(&format!("cm/{g}"), |b| {
            b.iter(|| complete_mapping_count(black_box(&spec), &limits).unwrap())
        });
    }
}

fn separation(c: &mut Criterion) {
    let limits = Limits::default();
    let mds = "mds52f4".parse::<CodeSpec>().unwrap().build().unwrap();
    c.bench_function("brute/mds52f4", |b| {
        b.iter(|| count_separated_bruteforce(black_box(&mds), &limits).unwrap())
    });
    let sum = sum_code(&"z5".parse().unwrap()).unwrap();
    c.bench_function("ix/sum-z5", |b| {
        b.iter(|| count_separated_ix(black_box(&sum), &limits).unwrap())
    });
}

fn arithmetic(c: &mut Criterion) {
    let x = BigRational::new(9.into(), 5.into());
    c.bench_function("log2/128", |b| {
        b.iter(|| Real::log2(black_box(&x), 128).unwrap())
    });
    c.bench_function("log2/1024", |b| {
        b.iter(|| Real::log2(black_box(&x), 1024).unwrap())
    });
    let m = BigUint::from(81u32);
    let s = BigUint::from(1_161_175_068u64);
    c.bench_function("rate/parity-gf9", |b| {
        b.iter(|| {
            rate_from_inner(
                9,
                3,
                &m,
                black_box(&s),
                Provenance::new("parity", "given"),
                128,
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, complete_mappings, separation, arithmetic);
criterion_main!(benches);
