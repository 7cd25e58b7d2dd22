//! The acceptance gate: ten criteria, one test each, each printing a
//! single pass or fail line (run with --nocapture to see the lines for
//! passing tests).
//!
//! Criterion 8 is expected to stay red: the third ratio leg measures a
//! drift of about 8.3% between the two probes, above its 5% gate, because
//! the subleading terms of that ratio decay like 1/sqrt(n). The test
//! reports the measured drifts and fails honestly rather than widening
//! the gate.

use num::BigInt;
use patoc::comb::{binomial, catalan};
use patoc::oracle::{frequency_table, oracle_count, OracleLimits, OracleQuery};
use patoc::verify;
use patoc::{AvoiderStream, CountTable, Pattern, VerdictStatus};
use std::process::Command;
use std::time::Instant;

fn forbidden() -> Pattern {
    "132".parse().expect("132 is a pattern")
}

fn unbounded() -> OracleLimits {
    OracleLimits {
        n_cap: 12,
        time_budget: None,
    }
}

fn pass(index: usize, slug: &str, detail: &str) {
    println!("acceptance criterion {index} ({slug}): PASS - {detail}");
}

fn fail(index: usize, slug: &str, detail: &str) {
    println!("acceptance criterion {index} ({slug}): FAIL - {detail}");
}

#[test]
fn criterion_01_reference_values() {
    let start = Instant::now();
    let table = CountTable::new();
    assert_eq!(table.a(2, 1), BigInt::from(4));
    assert_eq!(table.a(3, 1), BigInt::from(15));
    assert_eq!(table.a(2, 2), BigInt::from(1));
    let one: Pattern = "1".parse().unwrap();
    let twelve: Pattern = "12".parse().unwrap();
    assert_eq!(table.t(&one, 2), BigInt::from(4));
    assert_eq!(table.t(&one, 3), BigInt::from(15));
    assert_eq!(table.t(&twelve, 2), BigInt::from(1));
    let series = patoc::catalan_series(10);
    for n in 0..=10u64 {
        let direct = binomial(2 * n, n) / BigInt::from(n + 1);
        assert_eq!(series.coeff(n as usize), &direct, "n = {n}");
        assert_eq!(table.catalan(n as usize), direct, "n = {n}");
        assert_eq!(catalan(n), direct, "n = {n}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(
        1,
        "reference values",
        &format!("point values and C_0..C_10 exact by both routes in {elapsed:?}"),
    );
}

#[test]
fn criterion_02_triple_equivalence() {
    let start = Instant::now();
    let table = CountTable::new();
    let r = forbidden();
    let limits = unbounded();
    let mut cells = 0usize;
    for k in 1..=5usize {
        for n in 0..=11usize {
            if n < k {
                for q in Pattern::all_of_length(k) {
                    assert_eq!(table.t(&q, n), BigInt::from(0), "q = {q}, n = {n}");
                }
                continue;
            }
            let freq = frequency_table(&r, k, n, 4, &limits, None).expect("within caps");
            assert!(freq.complete);
            for (q, oracle_total) in &freq.counts {
                let dp = table.t(q, n);
                assert_eq!(&dp, oracle_total, "dp vs oracle at q = {q}, n = {n}");
                if q.is_increasing() {
                    assert_eq!(dp, table.a(n, k), "gf route at q = {q}, n = {n}");
                }
                if q.is_decreasing() {
                    assert_eq!(dp, table.d(n, k), "gf route at q = {q}, n = {n}");
                }
                cells += 1;
            }
        }
    }
    pass(
        2,
        "triple equivalence",
        &format!(
            "{cells} (q, n) cells agree across dp, oracle, and gf where applicable in {:?}",
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_03_bounds_and_sharpness() {
    let table = CountTable::new();
    let r = forbidden();
    let mut cells = 0usize;
    for k in 1..=5usize {
        for n in 0..=11usize {
            let a = table.a(n, k);
            let d = table.d(n, k);
            for q in AvoiderStream::new(k, &r) {
                let t = table.t(&q, n);
                assert!(a <= t && t <= d, "bounds fail at q = {q}, n = {n}");
                if n > k && k > 1 {
                    assert_eq!(
                        t == a,
                        q.is_increasing(),
                        "lower bound tightness at q = {q}, n = {n}"
                    );
                    assert_eq!(
                        t == d,
                        q.is_decreasing(),
                        "upper bound tightness at q = {q}, n = {n}"
                    );
                }
                cells += 1;
            }
        }
    }
    pass(
        3,
        "bounds and sharpness",
        &format!("{cells} cells inside [a, d], equality exactly at the monotone patterns for n > k"),
    );
}

#[test]
fn criterion_04_stationary_products() {
    let report = verify::check_stationary(30, 6);
    assert_eq!(report.status, VerdictStatus::Pass, "{}", report.to_json());
    pass(
        4,
        "stationary products",
        "A_k A_l = A_(k+1) A_(l-1) coefficientwise through order 30 for 1 <= k < l <= 6",
    );
}

#[test]
fn criterion_05_logconvexity_and_growth() {
    let convex = verify::check_logconvexity(30, 6);
    assert_eq!(convex.status, VerdictStatus::Pass, "{}", convex.to_json());
    let growth = verify::check_corollary_growth(30, 6);
    assert_eq!(growth.status, VerdictStatus::Pass, "{}", growth.to_json());
    pass(
        5,
        "log-convexity and growth",
        "D_a D_b <= D_(a-1) D_(b+1) through order 30; D_2 equals its one-step form, D_k dominates it for k <= 6",
    );
}

#[test]
fn criterion_06_closed_forms_erratum() {
    let report = verify::check_closed_forms(30);
    assert_eq!(
        report.status,
        VerdictStatus::DocumentedErratum,
        "{}",
        report.to_json()
    );
    let first = report.witnesses.first().expect("erratum witnesses");
    assert_eq!(first.params, "n=2");
    assert_eq!(first.expected, "1");
    assert_eq!(first.actual, "3/5");
    assert!(
        first.actual.contains('/'),
        "the printed second-level value at n = 2 must be non-integral"
    );
    pass(
        6,
        "closed forms and erratum",
        "first and decreasing second-level forms exact for n <= 30; the printed \
         second-level form first fails at n = 2 (3/5 against the true 1) and the \
         corrected form matches every route",
    );
}

#[test]
fn criterion_07_b_sequence_nonnegative() {
    let report = verify::check_bn_nonnegativity(50);
    assert_eq!(report.status, VerdictStatus::Pass, "{}", report.to_json());
    pass(
        7,
        "b-sequence nonnegativity",
        "b_0 = b_1 = b_2 = 0 and b_n >= 0 for 3 <= n <= 50, by exact integer evaluation",
    );
}

#[test]
fn criterion_08_asymptotic_ratios() {
    let tolerance = 0.05;
    let report =
        verify::asymptotic_report(3, &[200, 400], 2000).expect("probes within the series cap");
    let mut lines = Vec::new();
    let mut over_gate = Vec::new();
    for row in &report.rows {
        lines.push(format!("{} drift {:.6}", row.label, row.drift));
        if !(row.drift < tolerance) {
            over_gate.push(format!("{} drifts {:.4}", row.label, row.drift));
        }
    }
    let detail = lines.join("; ");
    if over_gate.is_empty() {
        pass(8, "asymptotic ratios", &detail);
    } else {
        fail(8, "asymptotic ratios", &detail);
        panic!(
            "ratio drift above the 5% gate between n = 200 and n = 400: {}",
            over_gate.join("; ")
        );
    }
}

#[test]
fn criterion_09_sum_rule() {
    let r = forbidden();
    let limits = unbounded();
    for k in 1..=4usize {
        for n in k..=10usize {
            let freq = frequency_table(&r, k, n, 4, &limits, None).expect("within caps");
            assert!(freq.complete);
            let total: BigInt = freq.counts.values().sum();
            let expected = catalan(n as u64) * binomial(n as u64, k as u64);
            assert_eq!(total, expected, "k = {k}, n = {n}");
            assert_eq!(freq.avoider_count, catalan(n as u64), "k = {k}, n = {n}");
        }
    }
    pass(
        9,
        "sum rule",
        "every frequency table row-sums to C_n binom(n, k) for k <= 4, n <= 10",
    );
}

#[test]
fn criterion_10_determinism() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_patoc"))
            .args(["verify", "all"])
            .output()
            .expect("binary runs")
    };
    let (first, second) = (run(), run());
    assert_eq!(
        first.stdout, second.stdout,
        "verify all reports differ between consecutive runs"
    );
    assert_eq!(first.status.code(), second.status.code());
    assert!(
        matches!(first.status.code(), Some(0) | Some(1)),
        "unexpected exit {:?}",
        first.status.code()
    );

    let limits = unbounded();
    let q: Pattern = "21".parse().unwrap();
    let query = |partitions: usize| OracleQuery {
        r: forbidden(),
        q: q.clone(),
        n: 9,
        partitions,
    };
    let reference = oracle_count(&query(1), &limits, None).expect("within caps");
    assert!(reference.complete);
    for w in [2usize, 4, 8] {
        let probe = oracle_count(&query(w), &limits, None).expect("within caps");
        assert_eq!(probe.value, reference.value, "workers = {w}");
        assert_eq!(probe.processed, reference.processed, "workers = {w}");
        assert!(probe.complete);
    }
    let tables: Vec<_> = [1usize, 2, 4, 8]
        .iter()
        .map(|&w| frequency_table(&forbidden(), 3, 8, w, &limits, None).expect("within caps"))
        .collect();
    for table in &tables[1..] {
        assert_eq!(table, &tables[0], "frequency tables differ across worker counts");
    }
    pass(
        10,
        "determinism",
        "verify all byte-identical across consecutive runs; oracle output identical for workers 1, 2, 4, 8",
    );
}
