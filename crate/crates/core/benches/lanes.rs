//! Parallel lane vs sequential lane, on the two hot paths: series
//! products and batch claim verification.  Build with and without the
//! `parallel` feature to compare `mul`'s two implementations; within one
//! build, `mul` vs `mul_seq` and `verify_claims` vs a plain iterator show
//! the spread directly.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tcore::qseries::euler_function;
use tcore::radu::{verify_claim, verify_claims, CongruenceClaim};

fn series_products(c: &mut Criterion) {
    let mut group = c.benchmark_group("series-product");
    for order in [4096usize, 16384] {
        let euler = euler_function(order, Some(3)).unwrap();
        group.bench_with_input(BenchmarkId::new("mul", order), &euler, |b, s| {
            b.iter(|| s.mul(s).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("mul_seq", order), &euler, |b, s| {
            b.iter(|| s.mul_seq(s).unwrap())
        });
    }
    group.finish();
}

fn batch_verification(c: &mut Criterion) {
    let claims: Vec<CongruenceClaim> = [(5u64, 6u64), (7, 3), (11, 3), (13, 3), (17, 10), (19, 7), (23, 3)]
        .into_iter()
        .map(|(p, t)| CongruenceClaim { p, m: 3 * p, t, u: 3 })
        .collect();
    let mut group = c.benchmark_group("batch-verify");
    group.sample_size(10);
    group.bench_function("fan-out", |b| {
        b.iter(|| verify_claims(&claims))
    });
    group.bench_function("one-by-one", |b| {
        b.iter(|| claims.iter().map(verify_claim).collect::<Vec<_>>())
    });
    group.finish();
}

criterion_group!(benches, series_products, batch_verification);
criterion_main!(benches);
