//! Named verification suites over the counting engines.
//!
//! Each suite checks one identity, inequality, closed form, or asymptotic
//! claim about the occurrence totals, on an explicit parameter grid, and
//! returns a [`VerdictReport`] listing every violation it found.  Suites are
//! deterministic and idempotent: the same grid always produces a
//! byte-identical report.
//!
//! One suite is erratum-detecting by design: the second-level closed form as
//! printed fails in exact rational arithmetic, and the expected outcome is a
//! `documented-erratum` verdict whose first witness sits at `n = 2`,
//! together with a corrected form that must agree with both the series route
//! and the brute-force sweep before the suite asserts it.

use num::{BigInt, BigRational, ToPrimitive};
use thiserror::Error;

use crate::comb::{binomial, catalan, pow2};
use crate::counts::CountTable;
use crate::oracle::{oracle_count, OracleLimits, OracleQuery};
use crate::perm::{AvoiderStream, Pattern};
use crate::series::{inv_sqrt_series, TruncatedSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("probe {probe} lies beyond the series cap {cap}")]
    ProbeBeyondCap { probe: usize, cap: usize },
    #[error("asymptotic drift needs at least two distinct probe points")]
    TooFewProbes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    Pass,
    Fail,
    /// The suite expected to find violations and found exactly the expected
    /// ones.
    DocumentedErratum,
}

impl VerdictStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictStatus::Pass => "pass",
            VerdictStatus::Fail => "fail",
            VerdictStatus::DocumentedErratum => "documented-erratum",
        }
    }
}

/// One recorded violation: where, what was expected, what was seen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub params: String,
    pub expected: String,
    pub actual: String,
}

impl Witness {
    fn new(
        params: impl Into<String>,
        expected: impl std::fmt::Display,
        actual: impl std::fmt::Display,
    ) -> Self {
        Witness {
            params: params.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}

/// Outcome of one suite run on one grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerdictReport {
    pub suite: String,
    pub grid: String,
    pub status: VerdictStatus,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl VerdictReport {
    /// Pass exactly when no witness was recorded.
    fn graded(suite: &str, grid: String, witnesses: Vec<Witness>, notes: Vec<String>) -> Self {
        let status = if witnesses.is_empty() { VerdictStatus::Pass } else { VerdictStatus::Fail };
        VerdictReport { suite: suite.into(), grid, status, witnesses, notes }
    }

    /// Whether the outcome is the declared expectation for this suite: a
    /// clean pass, or the asserted erratum evidence.
    pub fn acceptable(&self) -> bool {
        self.status != VerdictStatus::Fail
    }

    /// Single-line JSON with fixed key order:
    /// `suite, grid, status, witnesses, notes`.
    pub fn to_json(&self) -> String {
        let mut out = String::with_capacity(128);
        out.push_str("{\"suite\":");
        push_json_str(&mut out, &self.suite);
        out.push_str(",\"grid\":");
        push_json_str(&mut out, &self.grid);
        out.push_str(",\"status\":\"");
        out.push_str(self.status.as_str());
        out.push_str("\",\"witnesses\":[");
        for (i, w) in self.witnesses.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("{\"params\":");
            push_json_str(&mut out, &w.params);
            out.push_str(",\"expected\":");
            push_json_str(&mut out, &w.expected);
            out.push_str(",\"actual\":");
            push_json_str(&mut out, &w.actual);
            out.push('}');
        }
        out.push_str("],\"notes\":[");
        for (i, n) in self.notes.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            push_json_str(&mut out, n);
        }
        out.push_str("]}");
        out
    }
}

fn push_json_str(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

fn forbidden() -> Pattern {
    Pattern::new(vec![1, 3, 2]).expect("132 is a pattern")
}

/// Every total is at least the increasing-pattern total: `t(q, n) >= a(n, k)`
/// for all 132-avoiding `q` with `|q| = k <= k_max` and all `n <= n_max`.
pub fn check_minimality(k_max: usize, n_max: usize) -> VerdictReport {
    bound_check("minimality", k_max, n_max, true)
}

/// Mirror bound: `t(q, n) <= d(n, k)` on the same grid.
pub fn check_maximality(k_max: usize, n_max: usize) -> VerdictReport {
    bound_check("maximality", k_max, n_max, false)
}

fn bound_check(suite: &str, k_max: usize, n_max: usize, lower: bool) -> VerdictReport {
    let table = CountTable::new();
    let r = forbidden();
    let mut witnesses = Vec::new();
    for k in 1..=k_max {
        for q in AvoiderStream::new(k, &r) {
            for n in 0..=n_max {
                let t = table.t(&q, n);
                if lower {
                    let a = table.a(n, k);
                    if t < a {
                        witnesses.push(Witness::new(
                            format!("q={q}, n={n}"),
                            format!("t >= {a}"),
                            &t,
                        ));
                    }
                } else {
                    let d = table.d(n, k);
                    if t > d {
                        witnesses.push(Witness::new(
                            format!("q={q}, n={n}"),
                            format!("t <= {d}"),
                            &t,
                        ));
                    }
                }
            }
        }
    }
    VerdictReport::graded(
        suite,
        format!("k <= {k_max}, n <= {n_max}"),
        witnesses,
        Vec::new(),
    )
}

/// Product identity across neighbouring levels:
/// `A_k A_l = A_{k+1} A_{l-1}` exactly through the given order, for all
/// `1 <= k < l <= k_l_max`.
pub fn check_stationary(order: usize, k_l_max: usize) -> VerdictReport {
    let table = CountTable::new();
    let mut witnesses = Vec::new();
    for k in 1..k_l_max {
        for l in k + 1..=k_l_max {
            let lhs = table.a_series(k, order).mul(&table.a_series(l, order));
            let rhs = table.a_series(k + 1, order).mul(&table.a_series(l - 1, order));
            if let Some(n) = first_difference(&lhs, &rhs) {
                witnesses.push(Witness::new(
                    format!("k={k}, l={l}, n={n}"),
                    lhs.coeff(n),
                    rhs.coeff(n),
                ));
            }
        }
    }
    VerdictReport::graded(
        "stationary",
        format!("order <= {order}, 1 <= k < l <= {k_l_max}"),
        witnesses,
        Vec::new(),
    )
}

/// Log-convexity of the decreasing-pattern series:
/// `D_a D_b <= D_{a-1} D_{b+1}` coefficientwise through the given order, for
/// all `2 <= a <= b <= ab_max`.
pub fn check_logconvexity(order: usize, ab_max: usize) -> VerdictReport {
    let table = CountTable::new();
    let mut witnesses = Vec::new();
    for a in 2..=ab_max {
        for b in a..=ab_max {
            let lhs = table.d_series(a, order).mul(&table.d_series(b, order));
            let rhs = table.d_series(a - 1, order).mul(&table.d_series(b + 1, order));
            if let Some(n) = first_excess(&lhs, &rhs) {
                witnesses.push(Witness::new(
                    format!("a={a}, b={b}, n={n}"),
                    format!("<= {}", rhs.coeff(n)),
                    lhs.coeff(n),
                ));
            }
        }
    }
    VerdictReport::graded(
        "logconvexity",
        format!("order <= {order}, 2 <= a <= b <= {ab_max}"),
        witnesses,
        Vec::new(),
    )
}

/// Growth of the decreasing-pattern series under one more level:
/// `D_2 = x D_1 / (1-4x)` exactly, and `D_k >= x D_{k-1} / (1-4x)`
/// coefficientwise for `3 <= k <= k_max`.
pub fn check_corollary_growth(order: usize, k_max: usize) -> VerdictReport {
    let table = CountTable::new();
    let geom = TruncatedSeries::geometric(4, order);
    let mut witnesses = Vec::new();
    let step = |k: usize| table.d_series(k - 1, order).mul(&geom).mul_xpow(1);
    if let Some(n) = first_difference(&table.d_series(2, order), &step(2)) {
        witnesses.push(Witness::new(
            format!("k=2, n={n}"),
            step(2).coeff(n),
            table.d_series(2, order).coeff(n),
        ));
    }
    for k in 3..=k_max {
        if let Some(n) = first_excess(&step(k), &table.d_series(k, order)) {
            witnesses.push(Witness::new(
                format!("k={k}, n={n}"),
                format!(">= {}", step(k).coeff(n)),
                table.d_series(k, order).coeff(n),
            ));
        }
    }
    VerdictReport::graded(
        "growth",
        format!("order <= {order}, k <= {k_max}"),
        witnesses,
        Vec::new(),
    )
}

/// Closed forms for the first two levels: `a(n,1) = binom(2n,n) - C_n =
/// n C_n`, `d(n,2) = binom(2n-1,n-1)(n+1) - 2^(2n-1)`, and the second-level
/// increasing form checked by [`check_a2_closed_form`], folded into one
/// verdict.
pub fn check_closed_forms(n_max: usize) -> VerdictReport {
    let table = CountTable::new();
    let mut fatal = Vec::new();
    for n in 0..=n_max as u64 {
        let a1 = table.a(n as usize, 1);
        let diff_form = binomial(2 * n, n) - catalan(n);
        let product_form = n * catalan(n);
        if a1 != diff_form || a1 != product_form {
            fatal.push(Witness::new(
                format!("forone n={n}"),
                format!("{diff_form} = {product_form}"),
                a1,
            ));
        }
    }
    for n in 1..=n_max as u64 {
        let d2 = table.d(n as usize, 2);
        let closed = binomial(2 * n - 1, n - 1) * (n + 1) - pow2(2 * n - 1);
        if d2 != closed {
            fatal.push(Witness::new(format!("dec2ex n={n}"), closed, d2));
        }
    }
    let legs = a2_legs(&table, n_max);
    grade_erratum_suite("closed-forms", format!("n <= {n_max}"), fatal, legs)
}

/// The second-level increasing closed form on its own: evaluates the form as
/// printed in exact rational arithmetic (expected to fail, first witness at
/// `n = 2`), then establishes the corrected form against the series route
/// for `n <= n_max` and the brute-force sweep for `n <= 10`.
pub fn check_a2_closed_form(n_max: usize) -> VerdictReport {
    let table = CountTable::new();
    let legs = a2_legs(&table, n_max);
    grade_erratum_suite("asc2ex", format!("n <= {n_max}"), Vec::new(), legs)
}

struct A2Legs {
    /// Mismatches of the form as printed; these are the expected evidence.
    erratum: Vec<Witness>,
    /// Mismatches of the corrected form; any entry fails the suite.
    fatal: Vec<Witness>,
    notes: Vec<String>,
}

/// `2^(2n-1) - (1/4) binom(2n+2, n+1) - (n/(2n+1)) binom(2n, n)`, exactly.
fn printed_a2(n: u64) -> BigRational {
    let lead = BigRational::new(pow2(2 * n), BigInt::from(2));
    let quarter = BigRational::new(binomial(2 * n + 2, n + 1), BigInt::from(4));
    let tail = BigRational::new(
        BigInt::from(n) * binomial(2 * n, n),
        BigInt::from(2 * n + 1),
    );
    lead - quarter - tail
}

/// Same form with the trailing coefficient `n/(2n+1)` replaced by
/// `n/(2n+2)`; algebraically `2^(2n-1) - (1/4) binom(2n+2, n+1)
/// - (1/2) binom(2n, n) + (1/2) C_n`.
fn corrected_a2(n: u64) -> BigRational {
    let lead = BigRational::new(pow2(2 * n), BigInt::from(2));
    let quarter = BigRational::new(binomial(2 * n + 2, n + 1), BigInt::from(4));
    let half_binom = BigRational::new(binomial(2 * n, n), BigInt::from(2));
    let half_cat = BigRational::new(catalan(n), BigInt::from(2));
    lead - quarter - half_binom + half_cat
}

fn a2_legs(table: &CountTable, n_max: usize) -> A2Legs {
    let mut erratum = Vec::new();
    let mut fatal = Vec::new();
    // the form as printed, scanned from n = 2, the smallest host length
    // admitting the pattern
    for n in 2..=n_max as u64 {
        let truth = BigRational::from_integer(table.a(n as usize, 2));
        let printed = printed_a2(n);
        if printed != truth {
            erratum.push(Witness::new(format!("n={n}"), truth, printed));
        }
    }
    // corrected form against the series route
    for n in 0..=n_max as u64 {
        let truth = BigRational::from_integer(table.a(n as usize, 2));
        let corrected = corrected_a2(n);
        if corrected != truth {
            fatal.push(Witness::new(
                format!("corrected, series route, n={n}"),
                truth,
                corrected,
            ));
        }
    }
    // corrected form against the brute-force sweep; unbounded budget keeps
    // the report deterministic
    let limits = OracleLimits { n_cap: 12, time_budget: None };
    for n in 0..=10u64 {
        let query = OracleQuery {
            r: forbidden(),
            q: Pattern::new(vec![1, 2]).expect("pattern"),
            n: n as usize,
            partitions: 4,
        };
        let swept = oracle_count(&query, &limits, None).expect("within cap");
        let corrected = corrected_a2(n);
        if corrected != BigRational::from_integer(swept.value.clone()) {
            fatal.push(Witness::new(
                format!("corrected, brute force, n={n}"),
                swept.value,
                corrected,
            ));
        }
    }
    let notes = vec![
        format!(
            "the printed second-level form fails at every n >= 1 (at n = 1 it gives {} against the true 0); witnesses start at n = 2, the first length admitting the pattern",
            printed_a2(1)
        ),
        format!(
            "corrected form replaces the trailing coefficient n/(2n+1) by n/(2n+2); it matches the series route for n <= {n_max} and the brute-force sweep for n <= 10"
        ),
    ];
    A2Legs { erratum, fatal, notes }
}

/// A suite that must both pass its sound legs and find the expected
/// erratum evidence.
fn grade_erratum_suite(
    suite: &str,
    grid: String,
    mut fatal: Vec<Witness>,
    legs: A2Legs,
) -> VerdictReport {
    fatal.extend(legs.fatal);
    let evidence_as_expected = legs
        .erratum
        .first()
        .is_some_and(|w| w.params == "n=2");
    let mut notes = legs.notes;
    let status = if !fatal.is_empty() {
        VerdictStatus::Fail
    } else if evidence_as_expected {
        VerdictStatus::DocumentedErratum
    } else {
        notes.push(
            "expected erratum evidence is missing: the form as printed did not fail at n = 2"
                .into(),
        );
        VerdictStatus::Fail
    };
    let mut witnesses = fatal;
    witnesses.extend(legs.erratum);
    VerdictReport { suite: suite.into(), grid, status, witnesses, notes }
}

/// `b_n >= 0`: the branch weight `b_n` vanishes for `n <= 2` and stays
/// nonnegative after.  Computed through the series form
/// `2b = x(1-4x)^(-3/2) + (x-1)/(1-4x) + (1-4x)^(-1/2)` in integers, and
/// cross-checked against the explicit binomial form
/// `binom(2n-3,n-2)(2n-1) - 3*2^(2n-3) + binom(2n-1,n-1)` for `n >= 3`.
pub fn check_bn_nonnegativity(n_max: usize) -> VerdictReport {
    let order = n_max;
    let s = inv_sqrt_series(order);
    let geom = TruncatedSeries::geometric(4, order);
    let x_minus_one = TruncatedSeries::x(order).sub(&TruncatedSeries::one(order));
    let twice_b = s.pow(3).mul_xpow(1).add(&x_minus_one.mul(&geom)).add(&s);
    let mut witnesses = Vec::new();
    for n in 0..=2.min(order) {
        if twice_b.coeff(n) != &BigInt::ZERO {
            witnesses.push(Witness::new(format!("n={n}"), 0, twice_b.coeff(n)));
        }
    }
    for n in 3..=order {
        let c = twice_b.coeff(n);
        if c < &BigInt::ZERO {
            witnesses.push(Witness::new(format!("n={n}"), ">= 0", c));
        }
        let n = n as u64;
        let explicit =
            binomial(2 * n - 3, n - 2) * (2 * n - 1) - BigInt::from(3) * pow2(2 * n - 3)
                + binomial(2 * n - 1, n - 1);
        if c != &(&explicit * 2) {
            witnesses.push(Witness::new(
                format!("n={n}, series vs explicit form"),
                explicit * 2,
                c,
            ));
        }
    }
    VerdictReport::graded("bn", format!("n <= {n_max}"), witnesses, Vec::new())
}

/// One convergence row of the asymptotic report.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticRow {
    /// Level `k` for the `a(n,k)` rows; `None` for the `d/a` ratio row.
    pub k: Option<usize>,
    pub label: String,
    /// `(probe, ratio)` pairs, probes ascending.
    pub ratios: Vec<(usize, f64)>,
    /// Relative drift between the two largest probes.
    pub drift: f64,
}

/// Convergence data for `a(n,k) ~ c 4^n n^((k-2)/2)` and for
/// `d(n,2)/a(n,2) ~ c sqrt(n)`.  Report only: it asserts nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub rows: Vec<AsymptoticRow>,
}

/// Ratios `a(n,k) / (4^n n^((k-2)/2))` for `k <= k_max` at the given probe
/// points, plus `d(n,2) / (a(n,2) sqrt(n))`.  All arithmetic is exact until
/// the final division.
pub fn asymptotic_report(
    k_max: usize,
    probes: &[usize],
    series_cap: usize,
) -> Result<AsymptoticReport, VerifyError> {
    let mut probes: Vec<usize> = probes.to_vec();
    probes.sort_unstable();
    probes.dedup();
    if probes.len() < 2 {
        return Err(VerifyError::TooFewProbes);
    }
    if let Some(&probe) = probes.iter().find(|&&p| p > series_cap) {
        return Err(VerifyError::ProbeBeyondCap { probe, cap: series_cap });
    }
    let table = CountTable::new();
    let top = *probes.last().expect("nonempty");
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let series = table.a_series(k, top);
        let ratios: Vec<(usize, f64)> = probes
            .iter()
            .map(|&n| {
                let exponent = (k as f64 - 2.0) / 2.0;
                (n, quarter_power_ratio(series.coeff(n), n) / (n as f64).powf(exponent))
            })
            .collect();
        rows.push(AsymptoticRow {
            k: Some(k),
            label: format!("a(n,{k}) / (4^n n^(({k}-2)/2))"),
            drift: drift(&ratios),
            ratios,
        });
    }
    let a2 = table.a_series(2, top);
    let d2 = table.d_series(2, top);
    let ratios: Vec<(usize, f64)> = probes
        .iter()
        .map(|&n| {
            (n, big_ratio(d2.coeff(n), a2.coeff(n)) / (n as f64).sqrt())
        })
        .collect();
    rows.push(AsymptoticRow {
        k: None,
        label: "d(n,2) / (a(n,2) sqrt(n))".into(),
        drift: drift(&ratios),
        ratios,
    });
    Ok(AsymptoticReport { rows })
}

/// Gate the asymptotic report: every row's drift between the two largest
/// probes must stay below `tolerance`.
pub fn check_asymptotics(
    k_max: usize,
    probes: &[usize],
    series_cap: usize,
    tolerance: f64,
) -> VerdictReport {
    let grid = format!("k <= {k_max}, probes {probes:?}, tolerance {tolerance}");
    let report = match asymptotic_report(k_max, probes, series_cap) {
        Ok(report) => report,
        Err(e) => {
            return VerdictReport {
                suite: "asymptotics".into(),
                grid,
                status: VerdictStatus::Fail,
                witnesses: Vec::new(),
                notes: vec![format!("refused: {e}")],
            }
        }
    };
    let mut witnesses = Vec::new();
    let mut notes = Vec::new();
    for row in &report.rows {
        let values: Vec<String> = row
            .ratios
            .iter()
            .map(|(n, r)| format!("n={n}: {r:.6}"))
            .collect();
        notes.push(format!(
            "{}: {}; drift {:.6}",
            row.label,
            values.join(", "),
            row.drift
        ));
        if !(row.drift < tolerance) {
            witnesses.push(Witness::new(
                row.label.clone(),
                format!("drift < {tolerance}"),
                format!("{:.6}", row.drift),
            ));
        }
    }
    notes.push(
        "finite probes only: slowly decaying lower-order terms can hold the drift above a tight tolerance even when the leading order is right"
            .into(),
    );
    let status =
        if witnesses.is_empty() { VerdictStatus::Pass } else { VerdictStatus::Fail };
    VerdictReport { suite: "asymptotics".into(), grid, status, witnesses, notes }
}

/// Value / 4^n as a float, computed by exact integer division first so no
/// intermediate overflows whatever the probe size.
fn quarter_power_ratio(value: &BigInt, n: usize) -> f64 {
    const SCALE: i64 = 1_000_000_000_000_000;
    let scaled = value * SCALE / pow2(2 * n as u64);
    scaled.to_f64().unwrap_or(f64::INFINITY) / SCALE as f64
}

/// Numerator / denominator as a float, same exact-first scheme.
fn big_ratio(numerator: &BigInt, denominator: &BigInt) -> f64 {
    const SCALE: i64 = 1_000_000_000_000_000;
    let scaled = numerator * SCALE / denominator;
    scaled.to_f64().unwrap_or(f64::INFINITY) / SCALE as f64
}

fn drift(ratios: &[(usize, f64)]) -> f64 {
    let last = ratios[ratios.len() - 1].1;
    let prev = ratios[ratios.len() - 2].1;
    ((last - prev) / prev).abs()
}

/// Strictness survey: for non-monotone 132-avoiding `q` and `n > k`, are the
/// bounds `a(n,k) < t(q,n) < d(n,k)` strict?  Reported, never asserted: no
/// threshold for "n large enough" is claimed anywhere.
pub fn sharpness_report(k_max: usize, n_max: usize) -> VerdictReport {
    let table = CountTable::new();
    let r = forbidden();
    let mut notes = Vec::new();
    for k in 2..=k_max {
        let others: Vec<Pattern> = AvoiderStream::new(k, &r)
            .filter(|q| !q.is_increasing() && !q.is_decreasing())
            .collect();
        if others.is_empty() {
            notes.push(format!("k={k}: every pattern is monotone, nothing to survey"));
            continue;
        }
        let mut ties = Vec::new();
        for n in k + 1..=n_max {
            let a = table.a(n, k);
            let d = table.d(n, k);
            for q in &others {
                let t = table.t(q, n);
                if t == a {
                    ties.push(format!("q={q}, n={n}: t equals a(n,{k})"));
                }
                if t == d {
                    ties.push(format!("q={q}, n={n}: t equals d(n,{k})"));
                }
            }
        }
        if ties.is_empty() {
            notes.push(format!(
                "k={k}: strict on both sides for all {} non-monotone patterns, {} <= n <= {n_max}",
                others.len(),
                k + 1
            ));
        } else {
            notes.extend(ties);
        }
    }
    VerdictReport {
        suite: "sharpness".into(),
        grid: format!("2 <= k <= {k_max}, k < n <= {n_max}"),
        status: VerdictStatus::Pass,
        witnesses: Vec::new(),
        notes,
    }
}

/// First order where the two series differ.
fn first_difference(lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> Option<usize> {
    lhs.coeffs()
        .iter()
        .zip(rhs.coeffs())
        .position(|(a, b)| a != b)
}

/// First order where `lhs` exceeds `rhs`.
fn first_excess(lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> Option<usize> {
    lhs.coeffs()
        .iter()
        .zip(rhs.coeffs())
        .position(|(a, b)| a > b)
}
