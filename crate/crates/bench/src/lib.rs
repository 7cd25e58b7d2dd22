//! Shared fixtures for the benchmark suite.

use patoc::Pattern;

/// The forbidden pattern defining the class every benchmark sweeps.
pub fn class_pattern() -> Pattern {
    "132".parse().expect("132 is a pattern")
}

/// A short non-monotone avoider, cheap to embed but not trivially so.
pub fn probe_pattern() -> Pattern {
    "213".parse().expect("213 is a pattern")
}
