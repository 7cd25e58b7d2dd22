//! Exact enumeration of classical pattern occurrences in 132-avoiding
//! permutations.
//!
//! Three independent engines compute `t(q, n)`, the total number of
//! occurrences of a pattern `q` summed over all 132-avoiding permutations of
//! length `n`:
//!
//! * [`oracle`]: brute force, enumerate the avoiders and count embeddings;
//! * [`counts`]: a decomposition recurrence on the position of the host's
//!   maximum entry, memoized over the closure of sub-patterns of `q`;
//! * [`series`]/[`counts`]: generating-function coefficient extraction for
//!   monotone patterns (`a(n, k)` increasing, `d(n, k)` decreasing).
//!
//! [`verify`] cross-checks the engines and machine-checks the identities,
//! inequalities, closed forms and growth claims these sequences satisfy,
//! including one closed-form variant that is documented as an erratum.
//!
//! All arithmetic is exact; floating point appears only in the asymptotic
//! ratio reports, as the last step.

pub mod comb;
pub mod counts;
pub mod oracle;
pub mod perm;
pub mod series;
pub mod verify;

pub use counts::CountTable;
pub use oracle::{FrequencyTable, OracleError, OracleLimits, OracleOutcome, OracleQuery, SignScan};
pub use perm::{AvoiderStream, CutList, Pattern, PermError};
pub use series::{catalan_series, f_series, inv_sqrt_series, SeriesError, TruncatedSeries};
pub use verify::{
    AsymptoticReport, AsymptoticRow, VerdictReport, VerdictStatus, VerifyError, Witness,
};
