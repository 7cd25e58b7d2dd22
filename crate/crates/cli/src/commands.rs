//! Subcommand implementations.
//!
//! Exit codes: 0 success (including documented-erratum verdicts), 1 at
//! least one verification suite failed, 2 usage error, 3 a resource cap
//! or time budget was exceeded.
//!
//! Output on stdout is deterministic: the same inputs and configuration
//! produce byte-identical bytes. Progress and warnings go to stderr.

use crate::config::{OutputFormat, RunConfig};
use clap::ValueEnum;
use num::BigInt;
use patoc::comb::binomial;
use patoc::counts::CountTable;
use patoc::oracle::{self, OracleError, OracleQuery, ProgressSink};
use patoc::verify;
use patoc::{catalan_series, f_series, inv_sqrt_series, AvoiderStream, Pattern, VerdictReport};
use std::fmt::Write as _;
use std::path::PathBuf;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAP: u8 = 3;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Method {
    /// Decomposition recurrence.
    Dp,
    /// Brute-force sweep of the class.
    Oracle,
    /// Series coefficient; monotone patterns only.
    Gf,
    /// Every route that applies, plus an agreement flag.
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum TableKind {
    /// Increasing-pattern totals.
    A,
    /// Decreasing-pattern totals.
    D,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum SeriesKind {
    Catalan,
    /// Central binomial coefficients.
    Invsqrt,
    /// One-step transfer factor.
    F,
    /// Increasing-pattern totals; needs --k.
    A,
    /// Decreasing-pattern totals; needs --k.
    D,
}

fn forbidden() -> Pattern {
    Pattern::new(vec![1, 3, 2]).expect("132 is a pattern")
}

fn usage(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn cap_exit(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    EXIT_CAP
}

fn oracle_exit(e: &OracleError) -> u8 {
    eprintln!("error: {e}");
    match e {
        OracleError::CapExceeded { .. } | OracleError::TableTooLarge { .. } => EXIT_CAP,
        _ => EXIT_USAGE,
    }
}

pub fn count(cfg: &RunConfig, q_text: &str, n: usize, method: Method) -> u8 {
    let q: Pattern = match q_text.parse() {
        Ok(q) => q,
        Err(e) => return usage(&format!("invalid pattern {q_text:?}: {e}")),
    };
    let monotone = q.is_increasing() || q.is_decreasing();
    if method == Method::Gf && !monotone {
        return usage("the gf route only serves increasing or decreasing patterns");
    }
    if method != Method::Oracle && n > cfg.gf_cap {
        return cap_exit(&format!("n = {n} exceeds the computed-route cap {}", cfg.gf_cap));
    }

    let table = CountTable::new();
    let mut rows: Vec<(&str, BigInt)> = Vec::new();

    if matches!(method, Method::Dp | Method::All) {
        rows.push(("dp", table.t(&q, n)));
    }

    if matches!(method, Method::Oracle | Method::All) {
        if n > cfg.oracle_cap {
            if method == Method::Oracle {
                return cap_exit(&format!("n = {n} exceeds the oracle cap {}", cfg.oracle_cap));
            }
            eprintln!(
                "note: oracle row skipped, n = {n} exceeds the oracle cap {}",
                cfg.oracle_cap
            );
        } else {
            let sink = |total: u64| eprintln!("oracle processed {total} hosts");
            let progress: ProgressSink<'_> = if cfg.verbose { Some(&sink) } else { None };
            let query = OracleQuery {
                r: forbidden(),
                q: q.clone(),
                n,
                partitions: cfg.workers,
            };
            match oracle::oracle_count(&query, &cfg.oracle_limits(), progress) {
                Ok(outcome) if outcome.complete => rows.push(("oracle", outcome.value)),
                Ok(_) => {
                    return cap_exit(
                        "time budget exhausted before the sweep finished; \
                         raise --time-budget or lower n",
                    )
                }
                Err(e) => return oracle_exit(&e),
            }
        }
    }

    if method == Method::Gf || (method == Method::All && monotone) {
        // An empty pattern counts as increasing; a(n, 0) is the class size.
        let value = if q.is_increasing() {
            table.a(n, q.len())
        } else {
            table.d(n, q.len())
        };
        rows.push(("gf", value));
    }

    let agreement =
        (method == Method::All).then(|| rows.windows(2).all(|w| w[0].1 == w[1].1));
    match cfg.format {
        OutputFormat::Csv | OutputFormat::Tsv => {
            let sep = if cfg.format == OutputFormat::Csv { ',' } else { '\t' };
            println!("method{sep}value");
            for (name, value) in &rows {
                println!("{name}{sep}{value}");
            }
            if let Some(agree) = agreement {
                println!("agreement{sep}{agree}");
            }
        }
        OutputFormat::Json => {
            let mut line = format!("{{\"q\":\"{q}\",\"n\":{n},\"rows\":[");
            for (i, (name, value)) in rows.iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                let _ = write!(line, "{{\"method\":\"{name}\",\"value\":{value}}}");
            }
            line.push(']');
            if let Some(agree) = agreement {
                let _ = write!(line, ",\"agreement\":{agree}");
            }
            line.push('}');
            println!("{line}");
        }
    }
    EXIT_OK
}

pub fn table(cfg: &RunConfig, kind: TableKind, n_max: usize, k_max: usize) -> u8 {
    if n_max > cfg.gf_cap {
        return cap_exit(&format!(
            "n_max = {n_max} exceeds the computed-route cap {}",
            cfg.gf_cap
        ));
    }
    let table = CountTable::new();
    let columns: Vec<_> = (1..=k_max)
        .map(|k| match kind {
            TableKind::A => table.a_series(k, n_max),
            TableKind::D => table.d_series(k, n_max),
        })
        .collect();
    match cfg.format {
        OutputFormat::Csv | OutputFormat::Tsv => {
            let sep = if cfg.format == OutputFormat::Csv { ',' } else { '\t' };
            println!("n{sep}k{sep}value");
            for n in 0..=n_max {
                for (col, series) in columns.iter().enumerate() {
                    println!("{n}{sep}{}{sep}{}", col + 1, series.coeff(n));
                }
            }
        }
        OutputFormat::Json => {
            for n in 0..=n_max {
                for (col, series) in columns.iter().enumerate() {
                    println!(
                        "{{\"n\":{n},\"k\":{},\"value\":{}}}",
                        col + 1,
                        series.coeff(n)
                    );
                }
            }
        }
    }
    EXIT_OK
}

pub fn series(cfg: &RunConfig, kind: SeriesKind, k: Option<usize>) -> u8 {
    let order = cfg.order;
    if order > cfg.gf_cap {
        return cap_exit(&format!(
            "order = {order} exceeds the computed-route cap {}",
            cfg.gf_cap
        ));
    }
    let need_k = || k.ok_or("this series kind needs --k");
    let series = match kind {
        SeriesKind::Catalan => catalan_series(order),
        SeriesKind::Invsqrt => inv_sqrt_series(order),
        SeriesKind::F => f_series(order),
        SeriesKind::A => match need_k() {
            Ok(k) => CountTable::new().a_series(k, order),
            Err(msg) => return usage(msg),
        },
        SeriesKind::D => match need_k() {
            Ok(k) => CountTable::new().d_series(k, order),
            Err(msg) => return usage(msg),
        },
    };
    for n in 0..=order {
        println!("{n}\t{}", series.coeff(n));
    }
    EXIT_OK
}

/// Suites run by `verify all`, in order. The standalone `asc2ex` suite is
/// subsumed by `closed-forms` and is not repeated.
const ALL_SUITES: [&str; 9] = [
    "minimality",
    "maximality",
    "stationary",
    "logconvexity",
    "growth",
    "closed-forms",
    "bn",
    "asymptotics",
    "sharpness",
];

fn known_suite(name: &str) -> bool {
    name == "asc2ex" || ALL_SUITES.contains(&name)
}

fn run_suite(name: &str, cfg: &RunConfig) -> Option<VerdictReport> {
    Some(match name {
        "minimality" => verify::check_minimality(5, 11),
        "maximality" => verify::check_maximality(5, 11),
        "stationary" => verify::check_stationary(cfg.order, 6),
        "logconvexity" => verify::check_logconvexity(cfg.order, 6),
        "growth" => verify::check_corollary_growth(cfg.order, 6),
        "closed-forms" => verify::check_closed_forms(30),
        "asc2ex" => verify::check_a2_closed_form(30),
        "bn" => verify::check_bn_nonnegativity(50),
        "asymptotics" => verify::check_asymptotics(3, &[200, 400], cfg.gf_cap, 0.05),
        "sharpness" => verify::sharpness_report(5, 11),
        _ => return None,
    })
}

pub fn verify_cmd(cfg: &RunConfig, suite: &str) -> u8 {
    let names: Vec<&str> = if suite == "all" {
        ALL_SUITES.to_vec()
    } else {
        vec![suite]
    };
    if let Some(bad) = names.iter().find(|name| !known_suite(name)) {
        eprintln!(
            "error: unknown suite {bad:?}; expected one of {}, asc2ex, or all",
            ALL_SUITES.join(", ")
        );
        return EXIT_USAGE;
    }
    let mut all_acceptable = true;
    for name in names {
        let report = run_suite(name, cfg).expect("validated above");
        println!("{}", report.to_json());
        if cfg.verbose {
            eprintln!("{name}: {}", report.status.as_str());
        }
        all_acceptable &= report.acceptable();
    }
    if all_acceptable {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

fn join_patterns(patterns: &[Pattern]) -> String {
    patterns
        .iter()
        .map(Pattern::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn sign_chars(signs: &[i8]) -> String {
    signs
        .iter()
        .map(|s| match s.signum() {
            -1 => '-',
            0 => '0',
            _ => '+',
        })
        .collect()
}

fn opt_num(v: Option<usize>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn explore(cfg: &RunConfig, r_text: &str, k: usize, n_max: usize) -> u8 {
    let r: Pattern = match r_text.parse() {
        Ok(r) => r,
        Err(e) => return usage(&format!("invalid pattern {r_text:?}: {e}")),
    };
    if r.is_empty() {
        return usage("the forbidden pattern must be nonempty");
    }
    let out_root = std::env::var_os("PATOC_OUTPUT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    let dir = out_root.join(format!("explore_r{r}_k{k}_n{n_max}"));
    if let Err(e) = std::fs::create_dir_all(&dir) {
        return usage(&format!("cannot create {}: {e}", dir.display()));
    }

    let limits = cfg.oracle_limits();
    let sink = |total: u64| eprintln!("processed {total} hosts");
    let progress: ProgressSink<'_> = if cfg.verbose { Some(&sink) } else { None };
    if k > n_max {
        eprintln!("warning: k = {k} exceeds n_max = {n_max}; tables are empty");
    }

    let mut incomplete = false;
    let mut tracks = String::from("n,argmin,argmax\n");
    let mut rowsums = String::from("n,avoiders,total,expected,ok,complete\n");
    let mut summary = Vec::new();
    for n in k..=n_max {
        let freq = match oracle::frequency_table(&r, k, n, cfg.workers, &limits, progress) {
            Ok(t) => t,
            Err(e) => return oracle_exit(&e),
        };
        incomplete |= !freq.complete;
        let mut body = String::from("pattern,count\n");
        for (pattern, total) in &freq.counts {
            let _ = writeln!(body, "{pattern},{total}");
        }
        if let Err(e) = std::fs::write(dir.join(format!("freq_n{n}.csv")), body) {
            return usage(&format!("cannot write under {}: {e}", dir.display()));
        }
        let _ = writeln!(
            tracks,
            "{n},{},{}",
            join_patterns(&freq.argmin),
            join_patterns(&freq.argmax)
        );
        // The row sum counts k-subsequences, so it equals hosts * C(n, k)
        // even for a partial sweep.
        let total: BigInt = freq.counts.values().sum();
        let expected = &freq.avoider_count * binomial(n as u64, k as u64);
        let _ = writeln!(
            rowsums,
            "{n},{},{total},{expected},{},{}",
            freq.avoider_count,
            total == expected,
            freq.complete
        );
        summary.push(format!(
            "n={n}: argmin {} argmax {}{}",
            join_patterns(&freq.argmin),
            join_patterns(&freq.argmax),
            if freq.complete { "" } else { " (incomplete)" }
        ));
    }

    let mut scans = String::from("q1,q2,signs,first_strict,first_reversal,complete\n");
    if k <= n_max {
        let avoiders: Vec<Pattern> = AvoiderStream::new(k, &r).collect();
        for i in 0..avoiders.len() {
            for j in i + 1..avoiders.len() {
                let scan = match oracle::ordering_stability_scan(
                    &r,
                    &avoiders[i],
                    &avoiders[j],
                    n_max,
                    cfg.workers,
                    &limits,
                ) {
                    Ok(s) => s,
                    Err(e) => return oracle_exit(&e),
                };
                incomplete |= !scan.complete;
                let _ = writeln!(
                    scans,
                    "{},{},{},{},{},{}",
                    avoiders[i],
                    avoiders[j],
                    sign_chars(&scan.signs),
                    opt_num(scan.first_strict),
                    opt_num(scan.first_reversal),
                    scan.complete
                );
            }
        }
    }

    for (name, body) in [
        ("tracks.csv", tracks),
        ("scans.csv", scans),
        ("rowsums.csv", rowsums),
    ] {
        if let Err(e) = std::fs::write(dir.join(name), body) {
            return usage(&format!("cannot write under {}: {e}", dir.display()));
        }
    }
    for line in summary {
        println!("{line}");
    }
    println!("wrote {}", dir.display());
    if incomplete {
        eprintln!("warning: time budget exhausted; results are partial");
        return EXIT_CAP;
    }
    EXIT_OK
}
