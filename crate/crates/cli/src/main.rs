//! Command-line front door over the counting engines: point queries,
//! monotone tables, series dumps, verification suites, and a class
//! explorer.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use commands::{Method, SeriesKind, TableKind};
use config::{OutputFormat, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "patoc",
    version,
    about = "Exact enumeration of pattern occurrences in 132-avoiding permutations"
)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

/// Settings resolve as defaults, then the config file, then flags.
#[derive(Args)]
struct Overrides {
    /// Config file with one key=value per line.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Truncation order for series dumps and series-backed suites.
    #[arg(long, global = true, value_name = "N")]
    order: Option<usize>,
    /// Largest host length for brute-force sweeps.
    #[arg(long, global = true, value_name = "N")]
    oracle_cap: Option<usize>,
    /// Largest index for recurrence and coefficient queries.
    #[arg(long, global = true, value_name = "N")]
    gf_cap: Option<usize>,
    /// Worker threads for sweeps.
    #[arg(long, global = true, value_name = "W")]
    workers: Option<usize>,
    /// Sweep budget in seconds; 0 means unbounded.
    #[arg(long, global = true, value_name = "SECS")]
    time_budget: Option<u64>,
    /// Output format for count and table.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Progress and per-suite notes on stderr.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Total occurrences of one pattern at one length, by one or all routes.
    Count {
        /// Pattern, as digits (213) or comma-separated values (2,1,3).
        q: String,
        /// Host length.
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
    },
    /// Monotone-pattern totals on the grid n <= n_max, 1 <= k <= k_max.
    Table {
        #[arg(value_enum)]
        kind: TableKind,
        n_max: usize,
        k_max: usize,
    },
    /// One series as index<TAB>coefficient lines, up to the configured order.
    Series {
        #[arg(value_enum)]
        kind: SeriesKind,
        /// Pattern length for the a and d kinds.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run one verification suite, or "all". Emits one JSON verdict per line.
    Verify {
        /// Suite name, or "all".
        suite: String,
    },
    /// Frequency tables, extremal tracks, and sign scans for one class,
    /// written as CSV files under the output directory (PATOC_OUTPUT_DIR,
    /// default ".").
    Explore {
        /// Forbidden pattern defining the class.
        r: String,
        /// Length of the patterns being tallied.
        k: usize,
        /// Largest host length.
        n_max: usize,
    },
}

fn resolve(overrides: &Overrides) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &overrides.config {
        cfg.apply_file(path)?;
    }
    if let Some(v) = overrides.order {
        cfg.order = v;
    }
    if let Some(v) = overrides.oracle_cap {
        cfg.oracle_cap = v;
    }
    if let Some(v) = overrides.gf_cap {
        cfg.gf_cap = v;
    }
    if let Some(v) = overrides.workers {
        cfg.workers = v;
    }
    if let Some(v) = overrides.time_budget {
        cfg.time_budget_secs = v;
    }
    if let Some(v) = overrides.format {
        cfg.format = v;
    }
    if overrides.verbose {
        cfg.verbose = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    // Die quietly when the read end of a pipe closes, like any other
    // line-oriented tool, instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let cfg = match resolve(&cli.overrides) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(commands::EXIT_USAGE);
        }
    };
    let code = match cli.command {
        Command::Count { q, n, method } => commands::count(&cfg, &q, n, method),
        Command::Table { kind, n_max, k_max } => commands::table(&cfg, kind, n_max, k_max),
        Command::Series { kind, k } => commands::series(&cfg, kind, k),
        Command::Verify { suite } => commands::verify_cmd(&cfg, &suite),
        Command::Explore { r, k, n_max } => commands::explore(&cfg, &r, k, n_max),
    };
    ExitCode::from(code)
}
