use criterion::{criterion_group, criterion_main, Criterion};
use nlfsr_bench::toy_instance;
use nlfsr_core::attack::{
    char_poly, estimate, multiplier_search, rh_attack, rh_polynomial, standard_attack, AttackKind,
    StandardOptions,
};
use nlfsr_core::espresso::transform_espresso;

fn precomputation(c: &mut Criterion) {
    let (gen, _, _) = toy_instance(16, 0, 1);
    c.bench_function("char_poly n=16 d=2", |b| {
        b.iter(|| char_poly(&gen, 2).unwrap())
    });
    c.bench_function("rh polynomial n=16 d=3", |b| {
        b.iter(|| rh_polynomial(&gen).unwrap())
    });
    let f = transform_espresso().unwrap().lfsr.output().clone();
    c.bench_function("espresso multiplier search e<=2", |b| {
        b.iter(|| multiplier_search(&f, 2))
    });
}

fn attacks(c: &mut Criterion) {
    let mut group = c.benchmark_group("toy n=16");
    group.sample_size(10);
    let (gen, _, ks) = toy_instance(16, 1500, 2);
    group.bench_function("standard attack", |b| {
        b.iter(|| standard_attack(&gen, &ks, StandardOptions::default()).unwrap())
    });
    group.bench_function("rh attack", |b| b.iter(|| rh_attack(&gen, &ks).unwrap()));
    group.finish();
    c.bench_function("estimate", |b| {
        b.iter(|| estimate(256, 12, 2, 8, AttackKind::Standard).unwrap())
    });
}

criterion_group!(benches, precomputation, attacks);
criterion_main!(benches);
