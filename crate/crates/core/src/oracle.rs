//! Ground-truth brute force over avoidance classes.
//!
//! Everything here works by enumerating the full class `Av_n(r)` and
//! counting inside each host, with no shortcuts imported from the counting
//! theory: this module is the authority the recurrence and the generating
//! functions are validated against, so it has to stay independently dumb.
//!
//! Enumeration is partitioned by the first entry of the host; workers
//! backtrack independently and results merge by addition, which makes the
//! final value independent of the partition count.  A wall-clock budget can
//! abort oversized sweeps; aborted results carry partial tallies and are
//! marked incomplete.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::thread;
use std::time::{Duration, Instant};

use num::BigInt;
use thiserror::Error;

use crate::comb::{catalan, factorial};
use crate::perm::{AvoiderStream, Pattern};

/// Hosts per deadline check and per progress flush.
const BATCH: u64 = 1024;

/// Frequency tables materialize all `k!` patterns of length `k`.
const FREQUENCY_K_MAX: usize = 9;

/// Optional sink for progress events; called with the running number of
/// hosts processed.
pub type ProgressSink<'a> = Option<&'a (dyn Fn(u64) + Sync)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("host length {n} exceeds the oracle cap {cap}; the sweep would visit about {estimate} permutations")]
    CapExceeded { n: usize, cap: usize, estimate: BigInt },
    #[error("the forbidden pattern must be nonempty")]
    EmptyForbidden,
    #[error("pattern length {k} exceeds host length {n}")]
    PatternLongerThanHost { k: usize, n: usize },
    #[error("frequency tables over all patterns of length {k} are too large; the limit is {max}")]
    TableTooLarge { k: usize, max: usize },
    #[error("scanned patterns must have equal lengths, got {left} and {right}")]
    LengthMismatch { left: usize, right: usize },
}

/// One brute-force counting question.
#[derive(Debug, Clone)]
pub struct OracleQuery {
    /// Forbidden pattern defining the class; must be nonempty.
    pub r: Pattern,
    /// Pattern whose occurrences are summed.
    pub q: Pattern,
    /// Host length.
    pub n: usize,
    /// Worker count; the result does not depend on it.
    pub partitions: usize,
}

/// Guard rails for a sweep.
#[derive(Debug, Clone)]
pub struct OracleLimits {
    /// Largest host length the oracle will attempt.
    pub n_cap: usize,
    /// Wall-clock budget; `None` means unbounded.
    pub time_budget: Option<Duration>,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { n_cap: 12, time_budget: Some(Duration::from_secs(120)) }
    }
}

/// Result of a sweep.  `value` is exact when `complete`; after a budget
/// abort it tallies only the hosts in `processed`, a set that depends on
/// scheduling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleOutcome {
    pub value: BigInt,
    pub complete: bool,
    pub processed: u64,
}

/// Occurrence totals for every pattern of length `k` over one class, zeros
/// included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    pub counts: BTreeMap<Pattern, BigInt>,
    /// Patterns minimizing the total among the `r`-avoiding ones, in
    /// lexicographic order; ties are all listed, never broken silently.
    pub argmin: Vec<Pattern>,
    /// Likewise for the maximum.
    pub argmax: Vec<Pattern>,
    /// Hosts visited; the size of the class when `complete`.
    pub avoider_count: BigInt,
    pub complete: bool,
}

/// Signs of `t(q1, n) - t(q2, n)` for `n = 0..signs.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignScan {
    pub signs: Vec<i8>,
    /// First `n` with a strict inequality.
    pub first_strict: Option<usize>,
    /// First `n` past that where the strict sign flips.
    pub first_reversal: Option<usize>,
    pub complete: bool,
}

/// Sum of `count_occurrences(p, q)` over every `p` in `Av_n(r)`, by raw
/// enumeration.
pub fn oracle_count(
    query: &OracleQuery,
    limits: &OracleLimits,
    progress: ProgressSink<'_>,
) -> Result<OracleOutcome, OracleError> {
    check_class(&query.r)?;
    check_cap(&query.r, query.n, limits)?;
    let deadline = limits.time_budget.map(|b| Instant::now() + b);
    let (states, complete, processed) = sweep_class(
        &query.r,
        query.n,
        query.partitions,
        deadline,
        progress,
        || BigInt::ZERO,
        |host, acc: &mut BigInt| *acc += host.count_occurrences(&query.q),
    );
    Ok(OracleOutcome { value: states.into_iter().sum(), complete, processed })
}

/// Occurrence totals over `Av_n(r)` for every pattern of length `k` at
/// once: each host is swept once and each of its `k`-subsequences is
/// tallied under its flattened pattern.
pub fn frequency_table(
    r: &Pattern,
    k: usize,
    n: usize,
    partitions: usize,
    limits: &OracleLimits,
    progress: ProgressSink<'_>,
) -> Result<FrequencyTable, OracleError> {
    check_class(r)?;
    if k > FREQUENCY_K_MAX {
        return Err(OracleError::TableTooLarge { k, max: FREQUENCY_K_MAX });
    }
    if k > n {
        return Err(OracleError::PatternLongerThanHost { k, n });
    }
    check_cap(r, n, limits)?;
    let fact: Vec<usize> = {
        let mut f = vec![1usize; k.max(1)];
        for m in 1..k {
            f[m] = f[m - 1] * m;
        }
        f
    };
    let slots: usize = (1..=k).product();
    let deadline = limits.time_budget.map(|b| Instant::now() + b);
    let (states, complete, processed) = sweep_class(
        r,
        n,
        partitions,
        deadline,
        progress,
        || vec![0u128; slots],
        |host, tally: &mut Vec<u128>| tally_subsequences(host.entries(), k, &fact, tally),
    );
    let mut merged = vec![0u128; slots];
    for state in states {
        for (m, v) in merged.iter_mut().zip(state) {
            *m += v;
        }
    }
    let patterns = Pattern::all_of_length(k);
    let mut argmin: Vec<Pattern> = Vec::new();
    let mut argmax: Vec<Pattern> = Vec::new();
    let (mut best_min, mut best_max): (Option<u128>, Option<u128>) = (None, None);
    for (q, &v) in patterns.iter().zip(&merged) {
        if !q.avoids(r) {
            continue;
        }
        if best_min.is_none_or(|b| v < b) {
            best_min = Some(v);
            argmin.clear();
        }
        if best_min == Some(v) {
            argmin.push(q.clone());
        }
        if best_max.is_none_or(|b| v > b) {
            best_max = Some(v);
            argmax.clear();
        }
        if best_max == Some(v) {
            argmax.push(q.clone());
        }
    }
    let counts = patterns
        .into_iter()
        .zip(merged.into_iter().map(BigInt::from))
        .collect();
    Ok(FrequencyTable {
        counts,
        argmin,
        argmax,
        avoider_count: BigInt::from(processed),
        complete,
    })
}

/// Sign of `t_{r,q1}(n) - t_{r,q2}(n)` for each `n <= n_max`.  Gathers data
/// only; the caller draws no conclusion from a scan that merely failed to
/// find a reversal.
pub fn ordering_stability_scan(
    r: &Pattern,
    q1: &Pattern,
    q2: &Pattern,
    n_max: usize,
    partitions: usize,
    limits: &OracleLimits,
) -> Result<SignScan, OracleError> {
    if q1.len() != q2.len() {
        return Err(OracleError::LengthMismatch { left: q1.len(), right: q2.len() });
    }
    check_class(r)?;
    check_cap(r, n_max, limits)?;
    let mut signs: Vec<i8> = Vec::with_capacity(n_max + 1);
    let mut complete = true;
    for n in 0..=n_max {
        let run = |q: &Pattern| {
            let query =
                OracleQuery { r: r.clone(), q: q.clone(), n, partitions };
            oracle_count(&query, limits, None)
        };
        let (left, right) = (run(q1)?, run(q2)?);
        if !(left.complete && right.complete) {
            complete = false;
            break;
        }
        signs.push(match left.value.cmp(&right.value) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        });
    }
    let first_strict = signs.iter().position(|&s| s != 0);
    let first_reversal = first_strict.and_then(|fs| {
        signs[fs + 1..]
            .iter()
            .position(|&s| s == -signs[fs])
            .map(|off| fs + 1 + off)
    });
    Ok(SignScan { signs, first_strict, first_reversal, complete })
}

fn check_class(r: &Pattern) -> Result<(), OracleError> {
    if r.is_empty() {
        return Err(OracleError::EmptyForbidden);
    }
    Ok(())
}

fn check_cap(r: &Pattern, n: usize, limits: &OracleLimits) -> Result<(), OracleError> {
    if n > limits.n_cap {
        // class size is Catalan for any length-3 pattern; otherwise fall
        // back to the trivial bound
        let estimate = if r.len() == 3 { catalan(n as u64) } else { factorial(n as u64) };
        return Err(OracleError::CapExceeded { n, cap: limits.n_cap, estimate });
    }
    Ok(())
}

/// Run one worker state per partition over `Av_n(r)`, visiting every host
/// exactly once.  Returns the states in worker order, whether the sweep ran
/// to the end, and how many hosts were visited.
fn sweep_class<S: Send>(
    r: &Pattern,
    n: usize,
    partitions: usize,
    deadline: Option<Instant>,
    progress: ProgressSink<'_>,
    make: impl Fn() -> S + Sync,
    visit: impl Fn(&Pattern, &mut S) + Sync,
) -> (Vec<S>, bool, u64) {
    let expired = || deadline.is_some_and(|d| Instant::now() >= d);
    if n == 0 {
        let mut state = make();
        if expired() {
            return (vec![state], false, 0);
        }
        visit(&Pattern::empty(), &mut state);
        if let Some(f) = progress {
            f(1);
        }
        return (vec![state], true, 1);
    }
    let workers = partitions.max(1).min(n);
    let processed = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let states: Vec<S> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let (processed, stop, make, visit, expired) =
                    (&processed, &stop, &make, &visit, &expired);
                scope.spawn(move || {
                    let mut state = make();
                    let mut local: u64 = 0;
                    let firsts =
                        (1..=n as u8).filter(|v| (*v as usize - 1) % workers == w);
                    'sweep: for v in firsts {
                        for host in AvoiderStream::with_first_entry(n, r, v) {
                            if local % BATCH == 0 {
                                if stop.load(Ordering::Relaxed) || expired() {
                                    stop.store(true, Ordering::Relaxed);
                                    break 'sweep;
                                }
                            }
                            visit(&host, &mut state);
                            local += 1;
                            if local % BATCH == 0 {
                                let total =
                                    processed.fetch_add(BATCH, Ordering::Relaxed) + BATCH;
                                if let Some(f) = progress {
                                    f(total);
                                }
                            }
                        }
                    }
                    let rem = local % BATCH;
                    if rem != 0 {
                        let total = processed.fetch_add(rem, Ordering::Relaxed) + rem;
                        if let Some(f) = progress {
                            f(total);
                        }
                    }
                    state
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let complete = !stop.load(Ordering::Relaxed);
    (states, complete, processed.load(Ordering::Relaxed))
}

/// Add every `k`-subsequence of `values` to the tally, indexed by the
/// lexicographic rank of its flattened pattern.
fn tally_subsequences(values: &[u8], k: usize, fact: &[usize], tally: &mut [u128]) {
    if k == 0 {
        tally[0] += 1;
        return;
    }
    let n = values.len();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut rank = 0usize;
        for a in 0..k {
            let va = values[idx[a]];
            let below = (a + 1..k).filter(|&b| values[idx[b]] < va).count();
            rank += below * fact[k - 1 - a];
        }
        tally[rank] += 1;
        // advance to the next index combination
        let mut a = k;
        let advanced = loop {
            if a == 0 {
                break false;
            }
            a -= 1;
            if idx[a] != a + n - k {
                idx[a] += 1;
                for b in a + 1..k {
                    idx[b] = idx[b - 1] + 1;
                }
                break true;
            }
        };
        if !advanced {
            return;
        }
    }
}
