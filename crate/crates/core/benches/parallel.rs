//! Rayon vs sequential comparison for the data-parallel hot paths:
//! splitting spectra over prime ranges and bulk field construction.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use traceform_core::config::CoreConfig;
use traceform_core::numfield::field_from_i64;
use traceform_core::par::{par_map, seq_map};
use traceform_core::spectra::{splitting_spectrum, splitting_spectrum_seq};

fn bench_spectrum(c: &mut Criterion) {
    let cfg = CoreConfig::default();
    let septic = field_from_i64(&[1, -1, -4, 1, 4, 0, -3, 1], &cfg).unwrap();
    let mut group = c.benchmark_group("splitting_spectrum");
    for bound in [500u64, 3000] {
        group.bench_with_input(BenchmarkId::new("parallel", bound), &bound, |b, &bound| {
            b.iter(|| splitting_spectrum(&septic, bound))
        });
        group.bench_with_input(BenchmarkId::new("sequential", bound), &bound, |b, &bound| {
            b.iter(|| splitting_spectrum_seq(&septic, bound))
        });
    }
    group.finish();
}

fn bench_field_batch(c: &mut Criterion) {
    let cfg = CoreConfig::default();
    // A batch of small totally real quartics, the shape the scan chews on.
    let batch: Vec<Vec<i64>> = vec![
        vec![27, -7, -18, -2, 1],
        vec![-2, -9, -11, -2, 1],
        vec![-5, -17, -16, -2, 1],
        vec![23, 9, -9, -2, 1],
        vec![11, 2, 0, 1],
        vec![15, 0, 0, 0, 0, 0, 0, 0, 1],
        vec![-1, -2, -1, 2, 0, 1],
        vec![5, -4, 5, -1, 1],
    ];
    let mut group = c.benchmark_group("field_batch");
    group.bench_function("parallel", |b| {
        b.iter(|| {
            par_map(batch.clone(), |coeffs| {
                field_from_i64(&coeffs, &cfg).map(|k| k.disc().clone())
            })
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            seq_map(batch.clone(), |coeffs| {
                field_from_i64(&coeffs, &cfg).map(|k| k.disc().clone())
            })
        })
    });
    group.finish();
}

criterion_group!(benches, bench_spectrum, bench_field_batch);
criterion_main!(benches);
