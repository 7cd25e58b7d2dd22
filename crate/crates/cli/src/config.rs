//! Run configuration: defaults, flat key=value config files, flag overrides.

use clap::ValueEnum;
use patoc::OracleLimits;
use std::path::Path;
use std::time::Duration;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Tsv,
}

impl OutputFormat {
    fn parse_config(value: &str) -> Result<Self, String> {
        match value {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "tsv" => Ok(OutputFormat::Tsv),
            other => Err(format!("unknown format {other:?} (expected csv, json, or tsv)")),
        }
    }
}

/// Resolved settings for one invocation.
///
/// Resolution order: built-in defaults, then the config file named by
/// `--config`, then individual flags. A time budget of zero seconds means
/// unbounded.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Truncation order for series-backed queries and suites.
    pub order: usize,
    /// Largest permutation length the brute-force oracle will sweep.
    pub oracle_cap: usize,
    /// Largest index served by the recurrence and coefficient routes.
    pub gf_cap: usize,
    /// Worker threads for oracle sweeps.
    pub workers: usize,
    /// Oracle time budget in seconds; 0 disables the deadline.
    pub time_budget_secs: u64,
    pub format: OutputFormat,
    /// Progress and per-suite notes on stderr.
    pub verbose: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: 64,
            oracle_cap: 12,
            gf_cap: 2000,
            workers: 4,
            time_budget_secs: 120,
            format: OutputFormat::Csv,
            verbose: false,
        }
    }
}

impl RunConfig {
    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value, got {raw:?}", idx + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let at = |e: String| format!("line {}: {e}", idx + 1);
            match key {
                "order" => self.order = parse_usize(key, value).map_err(at)?,
                "oracle_cap" => self.oracle_cap = parse_usize(key, value).map_err(at)?,
                "gf_cap" => self.gf_cap = parse_usize(key, value).map_err(at)?,
                "workers" => self.workers = parse_usize(key, value).map_err(at)?,
                "time_budget" => {
                    self.time_budget_secs = value
                        .parse()
                        .map_err(|e| at(format!("bad value for time_budget: {e}")))?
                }
                "format" => self.format = OutputFormat::parse_config(value).map_err(at)?,
                "verbose" => {
                    self.verbose = value
                        .parse()
                        .map_err(|e| at(format!("bad value for verbose: {e}")))?
                }
                other => return Err(at(format!("unknown key {other:?}"))),
            }
        }
        Ok(())
    }

    /// Reject settings no command can honor.
    pub fn validate(&self) -> Result<(), String> {
        if self.order == 0 {
            return Err("order must be at least 1".into());
        }
        if self.workers == 0 {
            return Err("workers must be at least 1".into());
        }
        if self.gf_cap == 0 {
            return Err("gf_cap must be at least 1".into());
        }
        Ok(())
    }

    pub fn oracle_limits(&self) -> OracleLimits {
        OracleLimits {
            n_cap: self.oracle_cap,
            time_budget: (self.time_budget_secs > 0)
                .then(|| Duration::from_secs(self.time_budget_secs)),
        }
    }
}

fn parse_usize(key: &str, value: &str) -> Result<usize, String> {
    value
        .parse()
        .map_err(|e| format!("bad value for {key}: {e}"))
}
