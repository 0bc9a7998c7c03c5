use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use fitype_core::fitype::check_fi_type;
use fitype_core::gen;
use fitype_core::groth::grothendieck;
use fitype_core::group::GroupTable;
use fitype_core::theorem::{gpow_witness, verify_main_theorem, WitnessSource};

fn pools(c: &mut Criterion) {
    let fi4 = gen::fi_truncated(4);
    let g = GroupTable::cyclic(2);
    let m = gen::indexed_gpow(&g, 3);
    let w = gpow_witness(&m, &g);
    let t = grothendieck(Arc::new(m)).unwrap();
    let sequential = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();

    let mut group = c.benchmark_group("fi_type_audit_fi4");
    group.sample_size(10);
    group.bench_function("one_thread", |b| b.iter(|| sequential.install(|| check_fi_type(&fi4))));
    group.bench_function("default_pool", |b| b.iter(|| check_fi_type(&fi4)));
    group.finish();

    let mut group = c.benchmark_group("main_theorem_gpow_z2_3");
    group.sample_size(10);
    group.bench_function("one_thread", |b| {
        b.iter(|| sequential.install(|| verify_main_theorem(&t, WitnessSource::Given(&w)).unwrap()))
    });
    group.bench_function("default_pool", |b| {
        b.iter(|| verify_main_theorem(&t, WitnessSource::Given(&w)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, pools);
criterion_main!(benches);
