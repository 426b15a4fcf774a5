use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use peirce_lie::factory;
use peirce_lie::peirce::delta_grading;
use peirce_lie::standard::extend_to_standard;
use peirce_lie::{Algebra, FieldSpec, IdempotentFrame, MatrixShape};

fn diagonal_frame(a: &Arc<Algebra>, n: usize) -> IdempotentFrame {
    let shape = MatrixShape { n, inner_dim: 1 };
    let es = (0..n).map(|i| shape.unit(a.field(), i, i)).collect();
    IdempotentFrame::build(a.clone(), es, false).unwrap()
}

fn derived_ring(c: &mut Criterion) {
    let m4 = Algebra::full_matrix(FieldSpec::prime(3).unwrap(), 4).unwrap();
    c.bench_function("derived_lie_ring M4(F3)", |b| b.iter(|| black_box(&m4).derived_lie_ring()));
    let m3 = Algebra::full_matrix(FieldSpec::Rational, 3).unwrap();
    c.bench_function("derived_lie_ring M3(Q)", |b| b.iter(|| black_box(&m3).derived_lie_ring()));
}

fn grading(c: &mut Criterion) {
    let a = factory::full_matrix(FieldSpec::prime(3).unwrap(), 4).unwrap();
    let frame = diagonal_frame(&a, 4);
    c.bench_function("delta_grading M4(F3)", |b| b.iter(|| delta_grading(black_box(&frame)).unwrap()));
}

fn standard(c: &mut Criterion) {
    let f = FieldSpec::Rational;
    let a = factory::full_matrix(f, 3).unwrap();
    let frame = diagonal_frame(&a, 3);
    let (p, p_inv) = factory::permutation_matrix(f, &[1, 2, 0]);
    let phi = factory::conjugation(&a, &p, &p_inv, a.derived_lie_ring()).unwrap();
    c.bench_function("extend_to_standard conjugation M3(Q)", |b| {
        b.iter(|| extend_to_standard(black_box(&phi), &frame).unwrap())
    });
}

fn witness(c: &mut Criterion) {
    let mut group = c.benchmark_group("nonstandard_witness");
    group.sample_size(10);
    for (name, f) in [("Q", FieldSpec::Rational), ("F5", FieldSpec::prime(5).unwrap())] {
        group.bench_function(name, |b| b.iter(|| factory::nonstandard_witness(black_box(f)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, derived_ring, grading, standard, witness);
criterion_main!(benches);
