//! Occurrence totals over 132-avoiding permutations, by recurrence and by
//! generating function.
//!
//! `t(q, n)` is the total number of occurrences of the pattern `q` summed
//! over all 132-avoiding permutations of length `n`.  A 132-avoiding host
//! splits at its maximum into a block of large values, the maximum, and a
//! block of small values.  Classifying the occurrences of `q` by how they
//! meet that split (entirely left, entirely right, straddling a cut of `q`,
//! or through the maximum itself) gives the recurrence implemented here.
//! The derivation is this crate's own; the brute-force oracle is the
//! authority it is tested against, and the two are compared term by term in
//! the verification suites.
//!
//! For the monotone patterns the same classification closes at the level of
//! generating functions.  With `C` the Catalan series, `S = 1/sqrt(1-4x)`
//! and `F = xCS`, the increasing-pattern series obey `A_1 = S - C` and
//! `A_k = A_{k-1} F`, and the decreasing-pattern series obey `D_1 = A_1`,
//! `D_k = x (C D_{k-1} + sum_{j=1}^{k-1} D_j D_{k-j}) S`.  Everything stays
//! in integer arithmetic.

use std::collections::{HashMap, HashSet};
use std::sync::RwLock;

use num::BigInt;

use crate::perm::Pattern;
use crate::series::{catalan_series, f_series, inv_sqrt_series, TruncatedSeries};

fn forbidden() -> Pattern {
    Pattern::new(vec![1, 3, 2]).expect("132 is a pattern")
}

/// Shared memo for occurrence totals.  All methods take `&self`; the table
/// can be used from several threads.
pub struct CountTable {
    catalan: RwLock<Vec<BigInt>>,
    t_memo: RwLock<HashMap<Pattern, Vec<BigInt>>>,
    a_cache: RwLock<HashMap<usize, TruncatedSeries>>,
    d_cache: RwLock<HashMap<usize, TruncatedSeries>>,
}

impl CountTable {
    pub fn new() -> Self {
        CountTable {
            catalan: RwLock::new(vec![BigInt::from(1)]),
            t_memo: RwLock::new(HashMap::new()),
            a_cache: RwLock::new(HashMap::new()),
            d_cache: RwLock::new(HashMap::new()),
        }
    }

    /// Number of 132-avoiding permutations of length `n`, the `n`-th Catalan
    /// number.
    pub fn catalan(&self, n: usize) -> BigInt {
        self.catalan_prefix(n)[n].clone()
    }

    /// `C_0..=C_n` from the growing cache.
    fn catalan_prefix(&self, n: usize) -> Vec<BigInt> {
        {
            let cache = self.catalan.read().expect("lock poisoned");
            if cache.len() > n {
                return cache[..=n].to_vec();
            }
        }
        let mut cache = self.catalan.write().expect("lock poisoned");
        while cache.len() <= n {
            let m = cache.len();
            let mut acc = BigInt::ZERO;
            for i in 0..m {
                acc += &cache[i] * &cache[m - 1 - i];
            }
            cache.push(acc);
        }
        cache[..=n].to_vec()
    }

    /// Total occurrences of `q` over all 132-avoiding permutations of length
    /// `n`.  Zero whenever `q` itself contains 132, since subsequences of
    /// avoiders avoid.
    pub fn t(&self, q: &Pattern, n: usize) -> BigInt {
        if q.is_empty() {
            return self.catalan(n);
        }
        if q.contains(&forbidden()) {
            return BigInt::ZERO;
        }
        {
            let memo = self.t_memo.read().expect("lock poisoned");
            if let Some(vals) = memo.get(q) {
                if vals.len() > n {
                    return vals[n].clone();
                }
            }
        }
        let cat = self.catalan_prefix(n);
        let mut memo = self.t_memo.write().expect("lock poisoned");
        for p in subpattern_closure(q) {
            if p.is_empty() {
                continue;
            }
            let splits = split_pairs(&p);
            let mut vals = memo.remove(&p).unwrap_or_else(|| vec![BigInt::ZERO]);
            while vals.len() <= n {
                let m = vals.len();
                // value of t(u, i) with the empty pattern standing for the
                // Catalan numbers
                let get = |u: &Pattern, i: usize| -> &BigInt {
                    if u.is_empty() {
                        &cat[i]
                    } else {
                        &memo.get(u).expect("shorter patterns filled first")[i]
                    }
                };
                let mut acc = BigInt::ZERO;
                for i in 1..=m {
                    // occurrences entirely in the block left of the host max
                    acc += &vals[i - 1] * &cat[m - i];
                    // entirely in the block right of it
                    acc += &cat[i - 1] * &vals[m - i];
                    // straddling a cut of q, or passing through the max
                    for (front, back) in &splits {
                        acc += get(front, i - 1) * get(back, m - i);
                    }
                }
                vals.push(acc);
            }
            memo.insert(p, vals);
        }
        memo.get(q).expect("q is in its own closure")[n].clone()
    }

    /// Series of totals for the increasing pattern of length `k`,
    /// `sum_n t(12..k, n) x^n`, through the requested order.
    pub fn a_series(&self, k: usize, order: usize) -> TruncatedSeries {
        self.cached_series(&self.a_cache, k, order, |k, ord| {
            if k == 0 {
                return catalan_series(ord);
            }
            let a1 = inv_sqrt_series(ord).sub(&catalan_series(ord));
            a1.mul(&f_series(ord).pow(k as u32 - 1))
        })
    }

    /// Series of totals for the decreasing pattern of length `k`.
    pub fn d_series(&self, k: usize, order: usize) -> TruncatedSeries {
        self.cached_series(&self.d_cache, k, order, |k, ord| {
            let c = catalan_series(ord);
            if k == 0 {
                return c;
            }
            let s = inv_sqrt_series(ord);
            let mut ladder = vec![s.sub(&c)];
            for kk in 2..=k {
                let mut sum = c.mul(&ladder[kk - 2]);
                for j in 1..kk {
                    sum = sum.add(&ladder[j - 1].mul(&ladder[kk - 1 - j]));
                }
                ladder.push(sum.mul(&s).mul_xpow(1));
            }
            ladder.pop().expect("k >= 1")
        })
    }

    /// Total occurrences of the increasing pattern of length `k` in hosts of
    /// length `n`, from the series route.
    pub fn a(&self, n: usize, k: usize) -> BigInt {
        self.a_series(k, n).coeff(n).clone()
    }

    /// Total occurrences of the decreasing pattern of length `k`, from the
    /// series route.
    pub fn d(&self, n: usize, k: usize) -> BigInt {
        self.d_series(k, n).coeff(n).clone()
    }

    /// Read-through cache of one series per `k`, regrown by doubling when a
    /// higher order is requested.
    fn cached_series(
        &self,
        cache: &RwLock<HashMap<usize, TruncatedSeries>>,
        k: usize,
        order: usize,
        compute: impl Fn(usize, usize) -> TruncatedSeries,
    ) -> TruncatedSeries {
        {
            let cache = cache.read().expect("lock poisoned");
            if let Some(s) = cache.get(&k) {
                if s.order() >= order {
                    return s.truncate(order);
                }
            }
        }
        let mut cache = cache.write().expect("lock poisoned");
        if let Some(s) = cache.get(&k) {
            if s.order() >= order {
                return s.truncate(order);
            }
        }
        let target = order.max(cache.get(&k).map_or(0, |s| 2 * s.order()));
        let s = compute(k, target);
        cache.insert(k, s.clone());
        s.truncate(order)
    }
}

impl Default for CountTable {
    fn default() -> Self {
        Self::new()
    }
}

/// Every pattern reachable from `q` by repeatedly splitting at cuts and at
/// the maximum, including `q` and the empty pattern, shortest first.
fn subpattern_closure(q: &Pattern) -> Vec<Pattern> {
    let mut seen = HashSet::new();
    let mut stack = vec![q.clone()];
    while let Some(p) = stack.pop() {
        if seen.contains(&p) {
            continue;
        }
        if !p.is_empty() {
            for (front, back) in split_pairs(&p) {
                stack.push(front);
                stack.push(back);
            }
        }
        seen.insert(p);
    }
    let mut out: Vec<Pattern> = seen.into_iter().collect();
    out.sort_by_key(|p| (p.len(), p.clone()));
    out
}

/// The block pairs the recurrence sums over: one per cut of `q`, plus the
/// split at the maximum.
fn split_pairs(q: &Pattern) -> Vec<(Pattern, Pattern)> {
    let mut pairs = Vec::new();
    for &j in q.cuts().iter() {
        pairs.push(q.split_at_cut(j).expect("j comes from cuts()"));
    }
    pairs.push(q.split_at_max().expect("q is nonempty"));
    pairs
}
