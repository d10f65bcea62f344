use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use lpdo_bench::{euler_operator, landau, lodo_pair};
use lpdo_core::comult::common_left_multiples;
use lpdo_core::laplace::{cascade, Direction};
use lpdo_core::{Axis, RatFuncField, SkewRing};

fn compose(c: &mut Criterion) {
    let l = landau();
    c.bench_function("compose R*Q", |b| {
        b.iter(|| black_box(&l.r).compose(black_box(&l.q)).unwrap())
    });
    c.bench_function("adjoint L31", |b| b.iter(|| black_box(&l.l31).adjoint().unwrap()));
}

fn euclid(c: &mut Criterion) {
    let (a, b) = lodo_pair();
    let ring = SkewRing::new(RatFuncField::new(a.field(), Axis::X));
    let sa = a.to_skew(Axis::X).unwrap();
    let sb = b.to_skew(Axis::X).unwrap();
    c.bench_function("rgcd order 3", |bch| {
        bch.iter(|| ring.rgcd(black_box(&sa), black_box(&sb)).unwrap())
    });
    c.bench_function("llcm order 3", |bch| {
        bch.iter(|| ring.llcm(black_box(&sa), black_box(&sb)).unwrap())
    });
}

fn comult(c: &mut Criterion) {
    let l = landau();
    let ops = [l.p.clone(), l.q.clone()];
    let mut g = c.benchmark_group("comult");
    g.sample_size(20);
    g.bench_function("landau P,Q order 3", |b| {
        b.iter(|| common_left_multiples(black_box(&ops), 3).unwrap())
    });
    g.finish();
}

fn laplace(c: &mut Criterion) {
    let op = euler_operator(3);
    c.bench_function("cascade n=3 forward", |b| {
        b.iter(|| cascade(black_box(&op), Direction::Forward, 10).unwrap())
    });
}

criterion_group!(benches, compose, euclid, comult, laplace);
criterion_main!(benches);
