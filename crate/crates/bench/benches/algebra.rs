use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nlfsr_bench::{random_bits, random_function, rng};
use nlfsr_core::espresso::{build_espresso_g, espresso_keystream, transform_espresso};
use nlfsr_core::gf2::berlekamp_massey;
use nlfsr_core::transform::{compensate_iterative, uniform_lists};
use nlfsr_core::RegisterState;

fn anf(c: &mut Criterion) {
    let mut r = rng(1);
    let f = random_function(&mut r, 64, 200, 4);
    let g = random_function(&mut r, 64, 200, 4);
    c.bench_function("anf xor 200x200", |b| {
        b.iter(|| black_box(&f) ^ black_box(&g))
    });
    let f = random_function(&mut r, 64, 40, 3);
    let g = random_function(&mut r, 64, 40, 3);
    c.bench_function("anf mul 40x40", |b| {
        b.iter(|| black_box(&f) * black_box(&g))
    });
}

fn transform(c: &mut Criterion) {
    c.bench_function("espresso uniform transform", |b| {
        b.iter(|| transform_espresso().unwrap())
    });
    let g = build_espresso_g();
    let lists = uniform_lists(&g).unwrap();
    let (_, list) = &lists[0];
    c.bench_function("compensate espresso output by one list", |b| {
        b.iter(|| compensate_iterative(black_box(g.output()), list))
    });
}

fn simulation(c: &mut Criterion) {
    let key = vec![true; 128];
    let iv = vec![false; 96];
    c.bench_function("espresso init + 10k bits", |b| {
        b.iter(|| espresso_keystream(&key, &iv, 10_000).unwrap())
    });
    let g = build_espresso_g();
    let init = RegisterState::from_bits((0..256).map(|i| i % 3 == 0).collect());
    c.bench_function("galois G 10k bits", |b| {
        b.iter(|| g.keystream(&init, 10_000).unwrap())
    });
}

fn recurrence(c: &mut Criterion) {
    let mut r = rng(2);
    let s = random_bits(&mut r, 4000);
    c.bench_function("berlekamp-massey 4000 bits", |b| {
        b.iter(|| berlekamp_massey(black_box(&s)))
    });
}

criterion_group!(benches, anf, transform, simulation, recurrence);
criterion_main!(benches);
