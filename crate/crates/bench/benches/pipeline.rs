use criterion::{criterion_group, criterion_main, Criterion};
use pfaff_bench::{generic_constant, hyperquadric};
use pfaff_core::integral_element::ordinary_element_search;
use pfaff_core::involutivity::prolongation_dims;
use pfaff_core::jet_prolongation::{builtin, involution_loop, JetOptions};
use pfaff_core::torsion::torsion_absorbable;
use std::hint::black_box;

fn involutivity(c: &mut Criterion) {
    let (pr, f) = generic_constant();
    c.bench_function("prolongation_dims/generic_n3", |b| b.iter(|| prolongation_dims(black_box(&pr), &f, Some(6)).unwrap()));
}

fn torsion(c: &mut Criterion) {
    let (pr, jet) = hyperquadric();
    c.bench_function("torsion_absorbable/hyperquadric", |b| b.iter(|| torsion_absorbable(black_box(&pr), &jet).unwrap()));
}

fn integral(c: &mut Criterion) {
    let (pr, jet) = hyperquadric();
    c.bench_function("ordinary_element_search/hyperquadric", |b| {
        b.iter(|| ordinary_element_search(black_box(&pr), &jet, 4, 7).unwrap())
    });
}

fn jets(c: &mut Criterion) {
    let hq = builtin("hyperquadric").unwrap();
    let s = hq.stratum("null_levi").unwrap();
    let probe = s.probe("generic").unwrap();
    let opts = JetOptions::default();
    c.bench_function("involution_loop/hyperquadric", |b| {
        b.iter(|| involution_loop(black_box(&s.system), probe, Some(3), &opts).unwrap())
    });
    let cusp = builtin("cusp").unwrap();
    let s = cusp.stratum("regular").unwrap();
    let probe = s.probe("regular").unwrap();
    c.bench_function("involution_loop/cusp_regular", |b| {
        b.iter(|| involution_loop(black_box(&s.system), probe, None, &opts).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = involutivity, torsion, integral, jets
}
criterion_main!(benches);
