use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use delpezzo_bench::{frame_tuples, long_element};
use delpezzo_core::field::make_field;
use delpezzo_core::oracle::{count_identity, count_twisted, in_general_position, DEFAULT_BUDGET};
use delpezzo_core::{evaluate_class_count, ClassData, CycleType, OddPrimePower};

fn field(c: &mut Criterion) {
    let f = make_field(3, 7).unwrap();
    let xs: Vec<_> = f.elements().step_by(13).collect();
    c.bench_function("field/mul F_3^7", |b| {
        b.iter(|| xs.windows(2).fold(f.one(), |acc, w| f.mul(acc, f.add(w[0], w[1]))))
    });
    c.bench_function("field/frobenius F_3^7", |b| {
        b.iter(|| xs.iter().map(|&x| f.frobenius(x, 1).0 as u64).sum::<u64>())
    });
}

fn predicates(c: &mut Criterion) {
    let f = make_field(13, 1).unwrap();
    let tuples = frame_tuples(&f, 256);
    c.bench_function("oracle/in_general_position F_13 x256", |b| {
        b.iter(|| tuples.iter().filter(|t| in_general_position(&f, black_box(t))).count())
    });
}

fn weyl(c: &mut Criterion) {
    let w = long_element();
    c.bench_function("weyl/conjugate_by_simple", |b| {
        b.iter(|| (0..7).fold(black_box(w), |k, j| k.conjugate_by_simple(j)))
    });
    c.bench_function("weyl/char_poly_std", |b| {
        b.iter(|| delpezzo_core::weyl::char_poly(&black_box(w).std_matrix()))
    });
}

fn counting(c: &mut Criterion) {
    let data = ClassData::embedded().unwrap();
    let q = OddPrimePower::new(997).unwrap();
    c.bench_function("counting/all class rows at q=997", |b| {
        b.iter(|| {
            data.classes
                .iter()
                .map(|r| evaluate_class_count(&data, &r.name, q).unwrap())
                .count()
        })
    });
}

fn searches(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle/search");
    g.sample_size(10);
    let q9 = OddPrimePower::new(9).unwrap();
    g.bench_function("identity q=9", |b| b.iter(|| count_identity(q9, DEFAULT_BUDGET).unwrap()));
    let q3 = OddPrimePower::new(3).unwrap();
    let ct: CycleType = "3,3,1".parse().unwrap();
    g.bench_function("twisted (3,3,1) q=3", |b| {
        b.iter(|| count_twisted(&ct, q3, DEFAULT_BUDGET).unwrap())
    });
    g.finish();
}

criterion_group!(benches, field, predicates, weyl, counting, searches);
criterion_main!(benches);
