use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nicecone::certify::{poly, structured};
use nicecone::closedness::{image_dual_closed, BaseCone, LinMap};
use nicecone::linalg::{Metric, QVec};
use nicecone::structured::example1;
use nicecone::{PolyCone, SymMat};

fn pyramid() -> PolyCone {
    // cone over a pentagon in R^3 lifted with a fourth coordinate
    let gens = [
        [2, 0, 1, 1],
        [1, 2, 1, 0],
        [-1, 2, 1, 1],
        [-2, 0, 1, 0],
        [0, -2, 1, 1],
        [1, 1, 1, 3],
    ];
    let g: Vec<QVec> = gens.iter().map(|v| QVec::from_i64(v)).collect();
    PolyCone::from_generators(&Metric::euclidean(4), &g, &[]).unwrap()
}

fn polyhedral(c: &mut Criterion) {
    let k = pyramid();
    c.bench_function("dual", |b| b.iter(|| black_box(&k).dual()));
    c.bench_function("face_lattice", |b| b.iter(|| black_box(&k).face_lattice().unwrap()));
    c.bench_function("is_nice", |b| b.iter(|| poly::is_nice(black_box(&k)).unwrap()));
    c.bench_function("lattice_telescopes", |b| b.iter(|| poly::lattice_telescopes(black_box(&k)).unwrap()));
}

fn semidefinite(c: &mut Criterion) {
    let ex = example1().unwrap();
    c.bench_function("example1_is_nice", |b| b.iter(|| structured::is_nice(black_box(&ex.cone)).unwrap()));
    let m = Metric::sym(3);
    let y = SymMat::unit(3, 0, 1).add(&SymMat::unit(3, 2, 2));
    let lm = LinMap::new(&m, vec![SymMat::unit(3, 0, 0).to_svec(), y.to_svec()]).unwrap();
    c.bench_function("psd3_image_closedness", |b| {
        b.iter(|| image_dual_closed(&BaseCone::Psd(3), black_box(&lm)).unwrap())
    });
}

criterion_group!(benches, polyhedral, semidefinite);
criterion_main!(benches);
