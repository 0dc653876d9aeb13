use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use crossint::counterex::akbk_report;
use crossint::hirschorn::{hirschorn_optimum, Functional};
use crossint::oracle::oracle_compressed;
use crossint::setfam::InstanceParams;
use rayon::{ThreadPool, ThreadPoolBuilder};

fn pools() -> Vec<(&'static str, ThreadPool)> {
    vec![
        ("1-thread", ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("default", ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn hirschorn_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("hirschorn_sweep");
    let p = InstanceParams::new(120, 55, 60, 7).unwrap();
    for (name, pool) in pools() {
        group.bench_with_input(BenchmarkId::new(name, p), &p, |b, &p| {
            b.iter(|| pool.install(|| hirschorn_optimum(p, Functional::Product)))
        });
    }
    group.finish();
}

fn oracle_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_compressed");
    group.sample_size(10);
    let p = InstanceParams::new(8, 3, 4, 1).unwrap();
    for (name, pool) in pools() {
        group.bench_with_input(BenchmarkId::new(name, p), &p, |b, &p| {
            b.iter(|| pool.install(|| oracle_compressed(p, Functional::Product).unwrap()))
        });
    }
    group.finish();
}

fn akbk(c: &mut Criterion) {
    let mut group = c.benchmark_group("akbk");
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new(name, "k=3..20"), |b| {
            b.iter(|| pool.install(|| (3..=20).map(|k| akbk_report(k).unwrap().product_exceeds).count()))
        });
    }
    group.finish();
}

criterion_group!(benches, hirschorn_sweep, oracle_search, akbk);
criterion_main!(benches);
