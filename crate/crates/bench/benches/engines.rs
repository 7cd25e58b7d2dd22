//! Benchmarks for the five engines: class enumeration, the counting
//! recurrence, series construction, single-pattern sweeps, and full
//! frequency tables.

use criterion::{criterion_group, criterion_main, Criterion};
use patoc::counts::CountTable;
use patoc::oracle::{frequency_table, oracle_count, OracleLimits, OracleQuery};
use patoc::AvoiderStream;
use patoc_bench::{class_pattern, probe_pattern};
use std::hint::black_box;

fn enumeration(c: &mut Criterion) {
    let r = class_pattern();
    c.bench_function("avoiders_n10", |b| {
        b.iter(|| black_box(AvoiderStream::new(10, &r).count()))
    });
}

fn recurrence(c: &mut Criterion) {
    let q = probe_pattern();
    // A fresh table each iteration, so the memo does not absorb the work.
    c.bench_function("dp_t213_n50", |b| {
        b.iter(|| black_box(CountTable::new().t(&q, 50)))
    });
}

fn series(c: &mut Criterion) {
    c.bench_function("a3_series_order200", |b| {
        b.iter(|| black_box(CountTable::new().a_series(3, 200)))
    });
}

fn oracle(c: &mut Criterion) {
    let limits = OracleLimits {
        n_cap: 12,
        time_budget: None,
    };
    let query = OracleQuery {
        r: class_pattern(),
        q: probe_pattern(),
        n: 9,
        partitions: 4,
    };
    let mut group = c.benchmark_group("oracle");
    group.sample_size(20);
    group.bench_function("count_213_n9", |b| {
        b.iter(|| oracle_count(black_box(&query), &limits, None).expect("within caps"))
    });
    group.bench_function("frequency_k3_n9", |b| {
        b.iter(|| {
            frequency_table(&class_pattern(), 3, 9, 4, &limits, None).expect("within caps")
        })
    });
    group.finish();
}

criterion_group!(engines, enumeration, recurrence, series, oracle);
criterion_main!(engines);
