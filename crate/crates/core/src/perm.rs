//! Permutations in one-line notation and classical pattern containment.
//!
//! A pattern of length `k` is a permutation of `1..=k`.  A permutation `p`
//! contains a pattern `q` when some subsequence of `p` is order-isomorphic to
//! `q`; otherwise `p` avoids `q`.  The empty pattern is first-class: every
//! permutation contains it exactly once.
//!
//! Two structural operations drive the counting recurrences elsewhere in the
//! crate.  A *cut* of `q` is a position `j` with every entry of `q[..j]`
//! larger than every entry of `q[j..]`; `split_at_cut` flattens the two
//! blocks.  `split_at_max` severs `q` around its largest entry (excluded from
//! both sides).  In a 132-avoiding permutation every entry left of the
//! maximum exceeds every entry right of it, which is what makes both splits
//! compose.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use num::{BigInt, One};
use thiserror::Error;

use crate::comb::binomial;

/// Patterns are stored with one byte per entry; lengths beyond this are
/// outside the crate's working range anyway.
pub const MAX_LEN: usize = 255;

/// Above this many candidate subsequences, `count_occurrences` switches from
/// direct backtracking to the memoized walk over (host position, pattern
/// position, value windows).
const DIRECT_ENUMERATION_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("entries must use each value 1..=k exactly once")]
    NotAPermutation,
    #[error("window contains duplicate values")]
    DuplicateValues,
    #[error("cannot parse {0:?} as a pattern")]
    Malformed(String),
    #[error("pattern longer than {MAX_LEN} entries")]
    TooLong,
    #[error("position {j} is not a cut of this pattern")]
    NotACut { j: usize },
    #[error("operation undefined on the empty pattern")]
    EmptyPattern,
}

/// A permutation of `1..=k` in one-line notation, used both as host and as
/// pattern.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    entries: Vec<u8>,
}

impl Pattern {
    /// Validates that `entries` uses each value `1..=k` exactly once.
    pub fn new(entries: Vec<u8>) -> Result<Self, PermError> {
        if entries.len() > MAX_LEN {
            return Err(PermError::TooLong);
        }
        let k = entries.len();
        let mut seen = vec![false; k];
        for &e in &entries {
            let e = e as usize;
            if e == 0 || e > k || seen[e - 1] {
                return Err(PermError::NotAPermutation);
            }
            seen[e - 1] = true;
        }
        Ok(Pattern { entries })
    }

    pub fn empty() -> Self {
        Pattern { entries: Vec::new() }
    }

    /// The increasing pattern `1 2 .. k`.
    pub fn increasing(k: usize) -> Self {
        assert!(k <= MAX_LEN);
        Pattern { entries: (1..=k as u8).collect() }
    }

    /// The decreasing pattern `k .. 2 1`.
    pub fn decreasing(k: usize) -> Self {
        assert!(k <= MAX_LEN);
        Pattern { entries: (1..=k as u8).rev().collect() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn is_increasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_decreasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] > w[1])
    }

    /// 0-based position of the maximum entry; `None` when empty.
    pub fn max_position(&self) -> Option<usize> {
        let k = self.len() as u8;
        self.entries.iter().position(|&e| e == k)
    }

    /// The group-theoretic inverse: entry `v` at position `i` maps to entry
    /// `i` at position `v` (1-based).
    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.len()];
        for (i, &e) in self.entries.iter().enumerate() {
            inv[e as usize - 1] = i as u8 + 1;
        }
        Pattern { entries: inv }
    }

    /// Order-isomorphic reduction of a window of distinct values: each value
    /// is replaced by its rank, so `flatten(&[7, 6, 8]) = 213`.
    pub fn flatten<T: Ord>(window: &[T]) -> Result<Self, PermError> {
        if window.len() > MAX_LEN {
            return Err(PermError::TooLong);
        }
        let mut idx: Vec<usize> = (0..window.len()).collect();
        idx.sort_by(|&a, &b| window[a].cmp(&window[b]));
        for pair in idx.windows(2) {
            if window[pair[0]] == window[pair[1]] {
                return Err(PermError::DuplicateValues);
            }
        }
        let mut entries = vec![0u8; window.len()];
        for (rank, &i) in idx.iter().enumerate() {
            entries[i] = rank as u8 + 1;
        }
        Ok(Pattern { entries })
    }

    /// Every permutation of `1..=k` in lexicographic order. Intended for
    /// small `k`; the result has `k!` elements.
    pub fn all_of_length(k: usize) -> Vec<Pattern> {
        fn rec(k: usize, prefix: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Pattern>) {
            if prefix.len() == k {
                out.push(Pattern { entries: prefix.clone() });
                return;
            }
            for v in 1..=k as u8 {
                if !used[v as usize - 1] {
                    used[v as usize - 1] = true;
                    prefix.push(v);
                    rec(k, prefix, used, out);
                    prefix.pop();
                    used[v as usize - 1] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(k, &mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
        out
    }

    /// Exact number of subsequences of `self` order-isomorphic to `q`.
    pub fn count_occurrences(&self, q: &Pattern) -> BigInt {
        if q.is_empty() {
            return BigInt::one();
        }
        if q.len() > self.len() {
            return BigInt::ZERO;
        }
        let mut search = EmbedSearch::new(&self.entries, &q.entries);
        if binomial(self.len() as u64, q.len() as u64) > BigInt::from(DIRECT_ENUMERATION_LIMIT) {
            let mut memo = HashMap::new();
            search.count_memoized(0, 0, &mut memo)
        } else {
            let mut acc = BigInt::ZERO;
            search.count_direct(0, 0, &mut acc);
            acc
        }
    }

    /// Whether some subsequence of `self` is order-isomorphic to `q`.
    /// Short-circuits on the first embedding found.
    pub fn contains(&self, q: &Pattern) -> bool {
        if q.is_empty() {
            return true;
        }
        if q.len() > self.len() {
            return false;
        }
        EmbedSearch::new(&self.entries, &q.entries).exists(0, 0)
    }

    pub fn avoids(&self, r: &Pattern) -> bool {
        !self.contains(r)
    }

    /// Positions `j` (1-based, `1 <= j < k`) with every entry of `self[..j]`
    /// larger than every entry of `self[j..]`, ascending.
    pub fn cuts(&self) -> CutList {
        let k = self.len();
        if k < 2 {
            return CutList(Vec::new());
        }
        // prefix minima and suffix maxima
        let mut out = Vec::new();
        let mut suffix_max = vec![0u8; k + 1];
        for i in (0..k).rev() {
            suffix_max[i] = suffix_max[i + 1].max(self.entries[i]);
        }
        let mut prefix_min = u8::MAX;
        for j in 1..k {
            prefix_min = prefix_min.min(self.entries[j - 1]);
            if prefix_min > suffix_max[j] {
                out.push(j);
            }
        }
        CutList(out)
    }

    /// Flattened front and back blocks of the cut at `j`.
    pub fn split_at_cut(&self, j: usize) -> Result<(Pattern, Pattern), PermError> {
        if !self.cuts().contains(&j) {
            return Err(PermError::NotACut { j });
        }
        Ok((
            Pattern { entries: flatten_distinct(&self.entries[..j]) },
            Pattern { entries: flatten_distinct(&self.entries[j..]) },
        ))
    }

    /// Flattened blocks strictly before and strictly after the maximum
    /// entry; the maximum belongs to neither side.
    pub fn split_at_max(&self) -> Result<(Pattern, Pattern), PermError> {
        let m = self.max_position().ok_or(PermError::EmptyPattern)?;
        Ok((
            Pattern { entries: flatten_distinct(&self.entries[..m]) },
            Pattern { entries: flatten_distinct(&self.entries[m + 1..]) },
        ))
    }
}

impl fmt::Display for Pattern {
    /// Digit string for `k <= 9` (`132`), comma-separated beyond (`10,2,...`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for &e in &self.entries {
                write!(f, "{e}")?;
            }
            Ok(())
        } else {
            let mut first = true;
            for &e in &self.entries {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
                first = false;
            }
            Ok(())
        }
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({self})")
    }
}

impl FromStr for Pattern {
    type Err = PermError;

    /// Accepts a digit string (`"132"`, only valid for `k <= 9`) or
    /// comma-separated entries (`"10,2,3,..."`). The empty string is the
    /// empty pattern.
    fn from_str(s: &str) -> Result<Self, PermError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Pattern::empty());
        }
        let entries: Vec<u8> = if s.contains(',') {
            s.split(',')
                .map(|tok| tok.trim().parse::<u8>().map_err(|_| PermError::Malformed(s.into())))
                .collect::<Result<_, _>>()?
        } else {
            s.chars()
                .map(|c| match c {
                    '1'..='9' => Ok(c as u8 - b'0'),
                    _ => Err(PermError::Malformed(s.into())),
                })
                .collect::<Result<_, _>>()?
        };
        Pattern::new(entries)
    }
}

/// Cut positions of a pattern, ascending. Nonempty exactly when the pattern
/// is decomposable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutList(Vec<usize>);

impl Deref for CutList {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

fn flatten_distinct(values: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; values.len()];
    for (i, &v) in values.iter().enumerate() {
        let rank = values.iter().filter(|&&w| w < v).count();
        out[i] = rank as u8 + 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Embedding search
// ---------------------------------------------------------------------------

/// Backtracking walk assigning host positions to successive pattern
/// positions.  The already-chosen values confine the value at each remaining
/// pattern position `u` to an open window `(lo[u], hi[u])`; a choice is
/// consistent iff it lands in its window, so windows are the only state the
/// walk needs.
struct EmbedSearch<'a> {
    host: &'a [u8],
    q: &'a [u8],
    lo: Vec<u16>,
    hi: Vec<u16>,
    undo: Vec<(u32, u16)>,
}

impl<'a> EmbedSearch<'a> {
    fn new(host: &'a [u8], q: &'a [u8]) -> Self {
        EmbedSearch {
            host,
            q,
            lo: vec![0; q.len()],
            hi: vec![u16::MAX; q.len()],
            undo: Vec::new(),
        }
    }

    fn with_windows(host: &'a [u8], q: &'a [u8], lo: Vec<u16>, hi: Vec<u16>) -> Self {
        EmbedSearch { host, q, lo, hi, undo: Vec::new() }
    }

    /// Tighten the windows of positions after `t` given that `t` took value
    /// `v`; returns how many undo entries were pushed.
    fn apply(&mut self, t: usize, v: u16) -> usize {
        let mut pushed = 0;
        for u in t + 1..self.q.len() {
            if self.q[t] < self.q[u] {
                if v > self.lo[u] {
                    self.undo.push((2 * u as u32, self.lo[u]));
                    self.lo[u] = v;
                    pushed += 1;
                }
            } else if v < self.hi[u] {
                self.undo.push((2 * u as u32 + 1, self.hi[u]));
                self.hi[u] = v;
                pushed += 1;
            }
        }
        pushed
    }

    fn revert(&mut self, pushed: usize) {
        for _ in 0..pushed {
            let (slot, old) = self.undo.pop().expect("undo underflow");
            if slot % 2 == 0 {
                self.lo[slot as usize / 2] = old;
            } else {
                self.hi[slot as usize / 2] = old;
            }
        }
    }

    fn count_direct(&mut self, t: usize, start: usize, acc: &mut BigInt) {
        let k = self.q.len();
        let n = self.host.len();
        for i in start..=n - (k - t) {
            let v = self.host[i] as u16;
            if v <= self.lo[t] || v >= self.hi[t] {
                continue;
            }
            if t + 1 == k {
                *acc += 1u32;
            } else {
                let pushed = self.apply(t, v);
                self.count_direct(t + 1, i + 1, acc);
                self.revert(pushed);
            }
        }
    }

    /// Same walk with completion counts memoized on (pattern position, next
    /// host position, windows of the remaining positions).
    fn count_memoized(
        &mut self,
        t: usize,
        start: usize,
        memo: &mut HashMap<(usize, usize, Vec<(u16, u16)>), BigInt>,
    ) -> BigInt {
        let k = self.q.len();
        if t == k {
            return BigInt::one();
        }
        let n = self.host.len();
        let key = (
            t,
            start,
            (t..k).map(|u| (self.lo[u], self.hi[u])).collect::<Vec<_>>(),
        );
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let mut total = BigInt::ZERO;
        for i in start..=n - (k - t) {
            let v = self.host[i] as u16;
            if v <= self.lo[t] || v >= self.hi[t] {
                continue;
            }
            let pushed = self.apply(t, v);
            total += self.count_memoized(t + 1, i + 1, memo);
            self.revert(pushed);
        }
        memo.insert(key, total.clone());
        total
    }

    fn exists(&mut self, t: usize, start: usize) -> bool {
        let k = self.q.len();
        if t == k {
            return true;
        }
        let n = self.host.len();
        if n - start < k - t {
            return false;
        }
        for i in start..=n - (k - t) {
            let v = self.host[i] as u16;
            if v <= self.lo[t] || v >= self.hi[t] {
                continue;
            }
            let pushed = self.apply(t, v);
            let hit = self.exists(t + 1, i + 1);
            self.revert(pushed);
            if hit {
                return true;
            }
        }
        false
    }
}

// ---------------------------------------------------------------------------
// Avoider enumeration
// ---------------------------------------------------------------------------

/// Lazy lexicographic stream of the `r`-avoiding permutations of length `n`.
///
/// The stream is a prefix-backtracking walk: a prefix is extended value by
/// value, and an extension is rejected as soon as it completes an occurrence
/// of `r` (the new element is necessarily the last element of any new
/// occurrence, which keeps the check incremental).  Streams restricted to
/// distinct first entries partition the avoiders, which is how the oracle
/// shares work across threads.
pub struct AvoiderStream {
    n: usize,
    r: Vec<u8>,
    first_entry: Option<u8>,
    prefix: Vec<u8>,
    used: Vec<bool>,
    /// `cursor[d]` is the next value to try at depth `d`; one entry beyond
    /// the prefix while descending.
    cursor: Vec<u8>,
    primed: bool,
    exhausted: bool,
}

impl AvoiderStream {
    pub fn new(n: usize, r: &Pattern) -> Self {
        Self::build(n, r, None)
    }

    /// Restricts the stream to avoiders whose first entry is `first`.
    pub fn with_first_entry(n: usize, r: &Pattern, first: u8) -> Self {
        assert!(first as usize >= 1 && first as usize <= n);
        Self::build(n, r, Some(first))
    }

    fn build(n: usize, r: &Pattern, first_entry: Option<u8>) -> Self {
        assert!(n <= MAX_LEN, "host length beyond working range");
        AvoiderStream {
            n,
            r: r.entries.clone(),
            first_entry,
            prefix: Vec::with_capacity(n),
            used: vec![false; n],
            cursor: Vec::with_capacity(n + 1),
            primed: false,
            exhausted: false,
        }
    }
}

impl Iterator for AvoiderStream {
    type Item = Pattern;

    fn next(&mut self) -> Option<Pattern> {
        if self.exhausted {
            return None;
        }
        if !self.primed {
            self.primed = true;
            if self.r.is_empty() {
                // every permutation contains the empty pattern
                self.exhausted = true;
                return None;
            }
            if self.n == 0 {
                self.exhausted = true;
                return Some(Pattern::empty());
            }
            self.cursor.push(self.first_entry.unwrap_or(1));
        } else if self.prefix.len() == self.n {
            // resume after a yield: retract the deepest entry
            let v = self.prefix.pop().expect("nonempty prefix");
            self.used[v as usize - 1] = false;
        }
        loop {
            let d = self.prefix.len();
            let limit = match (d, self.first_entry) {
                (0, Some(f)) => f,
                _ => self.n as u8,
            };
            let mut chosen = None;
            let mut v = self.cursor[d];
            while v <= limit {
                if !self.used[v as usize - 1]
                    && !extension_completes(&self.prefix, v, &self.r)
                {
                    chosen = Some(v);
                    break;
                }
                v += 1;
            }
            match chosen {
                Some(v) => {
                    self.cursor[d] = v + 1;
                    self.prefix.push(v);
                    self.used[v as usize - 1] = true;
                    if self.prefix.len() == self.n {
                        return Some(Pattern { entries: self.prefix.clone() });
                    }
                    self.cursor.push(1);
                }
                None => {
                    self.cursor.pop();
                    match self.prefix.pop() {
                        Some(v) => self.used[v as usize - 1] = false,
                        None => {
                            self.exhausted = true;
                            return None;
                        }
                    }
                }
            }
        }
    }
}

/// Does appending `v` to `prefix` complete an occurrence of `r`?  The new
/// element plays the role of the last entry of `r`.
fn extension_completes(prefix: &[u8], v: u8, r: &[u8]) -> bool {
    match r.len() {
        0 => true,
        1 => true,
        2 => {
            if r[0] < r[1] {
                prefix.iter().any(|&x| x < v)
            } else {
                prefix.iter().any(|&x| x > v)
            }
        }
        3 => completes_three(prefix, v, r),
        _ => completes_general(prefix, v, r),
    }
}

/// One-pass check for length-3 forbidden patterns: each case reduces to a
/// scan with a running extremum over the earlier entries.
fn completes_three(prefix: &[u8], v: u8, r: &[u8]) -> bool {
    let v = v as u16;
    let mut min_all: u16 = u16::MAX;
    let mut max_lo: u16 = 0; // max of earlier values below v
    let mut min_hi: u16 = u16::MAX; // min of earlier values above v
    let mut max_hi: u16 = 0;
    let mut seen_hi = false;
    for &x in prefix {
        let x = x as u16;
        let hit = match (r[0], r[1], r[2]) {
            (1, 2, 3) => x < v && min_all < x,
            (1, 3, 2) => x > v && min_all < v,
            (2, 1, 3) => x < v && max_lo > x,
            (2, 3, 1) => x > v && min_hi < x,
            (3, 1, 2) => x < v && seen_hi,
            (3, 2, 1) => x > v && max_hi > x,
            _ => unreachable!("r is a permutation of 1..=3"),
        };
        if hit {
            return true;
        }
        min_all = min_all.min(x);
        if x < v {
            max_lo = max_lo.max(x);
        } else {
            min_hi = min_hi.min(x);
            max_hi = max_hi.max(x);
            seen_hi = true;
        }
    }
    false
}

/// General fallback: embed `r[..k-1]` into `prefix` with every window
/// pre-tightened by the comparison against `v`, which stands for `r[k-1]`.
fn completes_general(prefix: &[u8], v: u8, r: &[u8]) -> bool {
    let k = r.len();
    if prefix.len() < k - 1 {
        return false;
    }
    let head = &r[..k - 1];
    let last = r[k - 1];
    let mut lo = vec![0u16; k - 1];
    let mut hi = vec![u16::MAX; k - 1];
    for s in 0..k - 1 {
        if head[s] < last {
            hi[s] = v as u16;
        } else {
            lo[s] = v as u16;
        }
    }
    EmbedSearch::with_windows(prefix, head, lo, hi).exists(0, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::catalan;
    use proptest::prelude::*;

    fn p(s: &str) -> Pattern {
        s.parse().expect("test pattern")
    }

    #[test]
    fn construction_validates() {
        assert!(Pattern::new(vec![1, 3, 2]).is_ok());
        assert_eq!(Pattern::new(vec![1, 1]), Err(PermError::NotAPermutation));
        assert_eq!(Pattern::new(vec![2, 3]), Err(PermError::NotAPermutation));
        assert_eq!(Pattern::new(vec![0]), Err(PermError::NotAPermutation));
    }

    #[test]
    fn parse_and_display_round_trip() {
        assert_eq!(p("132").entries(), &[1, 3, 2]);
        assert_eq!(p("10,2,3,4,5,6,7,8,9,1").len(), 10);
        assert_eq!(p("132").to_string(), "132");
        assert_eq!(p("10,2,3,4,5,6,7,8,9,1").to_string(), "10,2,3,4,5,6,7,8,9,1");
        assert_eq!(p(""), Pattern::empty());
        assert!("1x2".parse::<Pattern>().is_err());
        assert!("120".parse::<Pattern>().is_err());
        // ten entries cannot be written as a digit string
        assert!("1234567891".parse::<Pattern>().is_err());
    }

    #[test]
    fn flatten_examples() {
        assert_eq!(Pattern::flatten(&[7, 6, 8]).unwrap(), p("213"));
        assert_eq!(Pattern::flatten(&[3, 4, 5]).unwrap(), p("123"));
        assert_eq!(Pattern::flatten(&[7, 6, 8, 3, 4, 5]).unwrap(), p("546123"));
        assert_eq!(Pattern::flatten::<u8>(&[]).unwrap(), Pattern::empty());
        assert_eq!(Pattern::flatten(&[5, 5]), Err(PermError::DuplicateValues));
    }

    #[test]
    fn count_occurrences_examples() {
        assert_eq!(p("41523").count_occurrences(&p("132")), BigInt::from(2));
        assert_eq!(p("34512").count_occurrences(&p("132")), BigInt::ZERO);
        assert_eq!(p("2134").count_occurrences(&p("213")), BigInt::from(2));
        assert_eq!(p("123").count_occurrences(&Pattern::empty()), BigInt::one());
        assert_eq!(p("12").count_occurrences(&p("123")), BigInt::ZERO);
        // full-length occurrence is exactly self-identity
        assert_eq!(p("2314").count_occurrences(&p("2314")), BigInt::one());
        assert_eq!(p("2314").count_occurrences(&p("2341")), BigInt::ZERO);
    }

    #[test]
    fn avoids_and_contains() {
        assert!(p("34512").avoids(&p("132")));
        assert!(!p("41523").avoids(&p("132")));
        assert!(!p("1").avoids(&Pattern::empty()));
        assert!(Pattern::empty().contains(&Pattern::empty()));
        assert!(!Pattern::empty().contains(&p("1")));
    }

    #[test]
    fn cuts_examples() {
        assert_eq!(*p("76834512").cuts(), [3, 6]);
        assert_eq!(*p("123").cuts(), []);
        assert_eq!(*p("321").cuts(), [1, 2]);
        assert_eq!(*p("231").cuts(), [2]);
        assert_eq!(*p("1").cuts(), []);
        assert_eq!(*Pattern::empty().cuts(), []);
    }

    #[test]
    fn split_at_cut_examples() {
        assert_eq!(p("231").split_at_cut(2).unwrap(), (p("12"), p("1")));
        assert_eq!(p("321").split_at_cut(1).unwrap(), (p("1"), p("21")));
        assert_eq!(
            p("76834512").split_at_cut(6).unwrap(),
            (p("546123"), p("12"))
        );
        assert_eq!(p("123").split_at_cut(1), Err(PermError::NotACut { j: 1 }));
        assert_eq!(p("231").split_at_cut(0), Err(PermError::NotACut { j: 0 }));
    }

    #[test]
    fn split_at_max_examples() {
        assert_eq!(p("231").split_at_max().unwrap(), (p("1"), p("1")));
        assert_eq!(p("123").split_at_max().unwrap(), (p("12"), Pattern::empty()));
        assert_eq!(p("5671234").split_at_max().unwrap(), (p("12"), p("1234")));
        assert_eq!(Pattern::empty().split_at_max(), Err(PermError::EmptyPattern));
    }

    #[test]
    fn cut_blocks_recombine() {
        // front block carries the top values: shifting it back up restores q
        for q in AvoiderStream::new(6, &p("132")) {
            for &j in q.cuts().iter() {
                let (front, back) = q.split_at_cut(j).unwrap();
                let mut rebuilt: Vec<u8> = front
                    .entries()
                    .iter()
                    .map(|&e| e + (q.len() - j) as u8)
                    .collect();
                rebuilt.extend_from_slice(back.entries());
                assert_eq!(rebuilt, q.entries());
            }
        }
    }

    #[test]
    fn max_split_recombines_for_avoiders() {
        for q in AvoiderStream::new(7, &p("132")) {
            let (alpha, beta) = q.split_at_max().unwrap();
            let mut rebuilt: Vec<u8> = alpha
                .entries()
                .iter()
                .map(|&e| e + beta.len() as u8)
                .collect();
            rebuilt.push(q.len() as u8);
            rebuilt.extend_from_slice(beta.entries());
            assert_eq!(rebuilt, q.entries());
        }
    }

    #[test]
    fn cuts_nonempty_iff_not_ending_in_max() {
        for n in 1..=7usize {
            for q in AvoiderStream::new(n, &p("132")) {
                let ends_in_max = *q.entries().last().unwrap() as usize == n;
                assert_eq!(q.cuts().is_empty(), ends_in_max, "q = {q}");
            }
        }
    }

    #[test]
    fn avoider_counts_are_catalan() {
        let r = p("132");
        for n in 0..=10usize {
            let count = AvoiderStream::new(n, &r).count();
            assert_eq!(BigInt::from(count), catalan(n as u64), "n = {n}");
        }
        // all six length-3 patterns give the same counts
        for r in Pattern::all_of_length(3) {
            let count = AvoiderStream::new(7, &r).count();
            assert_eq!(count, 429, "r = {r}");
        }
    }

    #[test]
    fn avoider_stream_first_values() {
        let got: Vec<String> = AvoiderStream::new(3, &p("132"))
            .map(|q| q.to_string())
            .collect();
        assert_eq!(got, ["123", "213", "231", "312", "321"]);
        let fourteen: Vec<Pattern> = AvoiderStream::new(4, &p("132")).collect();
        assert_eq!(fourteen.len(), 14);
        let mut sorted = fourteen.clone();
        sorted.sort();
        assert_eq!(fourteen, sorted, "stream is lexicographic");
    }

    #[test]
    fn avoider_stream_edge_cases() {
        // the empty permutation avoids any nonempty pattern
        assert_eq!(AvoiderStream::new(0, &p("132")).count(), 1);
        // nothing avoids the empty pattern
        assert_eq!(AvoiderStream::new(0, &Pattern::empty()).count(), 0);
        assert_eq!(AvoiderStream::new(3, &Pattern::empty()).count(), 0);
        // every permutation of length >= 1 contains the 1-pattern
        assert_eq!(AvoiderStream::new(1, &p("1")).count(), 0);
        // avoiding a length-2 pattern leaves exactly one permutation
        assert_eq!(AvoiderStream::new(5, &p("12")).count(), 1);
        assert_eq!(AvoiderStream::new(5, &p("21")).count(), 1);
    }

    #[test]
    fn first_entry_partition_is_disjoint_and_complete() {
        let r = p("132");
        for n in [4usize, 6] {
            let whole: Vec<Pattern> = AvoiderStream::new(n, &r).collect();
            let mut merged: Vec<Pattern> = (1..=n as u8)
                .flat_map(|v| AvoiderStream::with_first_entry(n, &r, v))
                .collect();
            merged.sort();
            let mut expect = whole.clone();
            expect.sort();
            assert_eq!(merged, expect);
        }
    }

    #[test]
    fn general_forbidden_patterns_work() {
        // length-4 forbidden pattern exercises the general extension check
        let counts: Vec<usize> = (0..=7)
            .map(|n| AvoiderStream::new(n, &p("1342")).count())
            .collect();
        // |Av_n(1342)|: 1, 1, 2, 6, 23, 103, 512, 2740
        assert_eq!(counts, [1, 1, 2, 6, 23, 103, 512, 2740]);
        let counts: Vec<usize> = (0..=7)
            .map(|n| AvoiderStream::new(n, &p("1234")).count())
            .collect();
        // |Av_n(1234)|: 1, 1, 2, 6, 23, 103, 513, 2761
        assert_eq!(counts, [1, 1, 2, 6, 23, 103, 513, 2761]);
    }

    #[test]
    fn memoized_and_direct_counting_agree() {
        // same walk, with and without memoization
        for n in [6usize, 8] {
            for host in AvoiderStream::new(n, &p("132")).step_by(3) {
                for q in Pattern::all_of_length(3) {
                    let direct = host.count_occurrences(&q);
                    let mut search = EmbedSearch::new(host.entries(), q.entries());
                    let memoized = search.count_memoized(0, 0, &mut HashMap::new());
                    assert_eq!(direct, memoized, "host {host}, q {q}");
                }
            }
        }
    }

    #[test]
    fn inverse_is_an_involution() {
        assert_eq!(p("231").inverse(), p("312"));
        assert_eq!(p("132").inverse(), p("132"));
        for q in Pattern::all_of_length(4) {
            assert_eq!(q.inverse().inverse(), q);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn flatten_is_idempotent(window in prop::collection::vec(-1000i32..1000, 0..10)
            .prop_filter("distinct", |w| {
                let mut s = w.clone();
                s.sort_unstable();
                s.windows(2).all(|p| p[0] != p[1])
            }))
        {
            let once = Pattern::flatten(&window).unwrap();
            let twice = Pattern::flatten(once.entries()).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn count_respects_inverse_symmetry(
            host in (1usize..=7).prop_flat_map(|n| Just((1..=n as u8).collect::<Vec<u8>>()).prop_shuffle()),
            q in (1usize..=4).prop_flat_map(|k| Just((1..=k as u8).collect::<Vec<u8>>()).prop_shuffle()),
        ) {
            let host = Pattern::new(host).unwrap();
            let q = Pattern::new(q).unwrap();
            prop_assert_eq!(
                host.count_occurrences(&q),
                host.inverse().count_occurrences(&q.inverse())
            );
        }

        #[test]
        fn count_is_bounded_by_binomial(
            host in (0usize..=8).prop_flat_map(|n| Just((1..=n as u8).collect::<Vec<u8>>()).prop_shuffle()),
            q in (0usize..=5).prop_flat_map(|k| Just((1..=k as u8).collect::<Vec<u8>>()).prop_shuffle()),
        ) {
            let host = Pattern::new(host).unwrap();
            let q = Pattern::new(q).unwrap();
            let count = host.count_occurrences(&q);
            prop_assert!(count <= binomial(host.len() as u64, q.len() as u64));
            // existence agrees with counting
            prop_assert_eq!(host.contains(&q), count > BigInt::ZERO);
        }
    }
}
