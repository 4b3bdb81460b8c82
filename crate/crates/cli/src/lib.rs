//! Command-line front end of `pwkrein-core`: μ sweeps, Painlevé VI tables
//! and verification suites, written as CSV or JSON.
//!
//! Exit codes are [`EXIT_PASS`], [`EXIT_FAIL`] (a computation failed or a
//! check missed its tolerance) and [`EXIT_USAGE`] (invalid flags or
//! envelope).

pub mod args;
pub mod grid;
pub mod output;
pub mod suites;
pub mod sweep;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Invalid flags, grid or envelope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Rendered output of a command plus what goes to standard error.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub body: String,
    pub failed: bool,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.failed {
            EXIT_FAIL
        } else {
            EXIT_PASS
        }
    }
}

/// `f(0), …, f(len-1)` evaluated on `jobs` threads, returned in index order.
pub fn par_map<T, F>(jobs: Option<usize>, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .expect("thread pool construction");
    pool.install(|| (0..len).into_par_iter().map(f).collect())
}

fn dispatch(cli: &Cli) -> Result<(Outcome, Option<&std::path::Path>), UsageError> {
    Ok(match &cli.command {
        Command::Mu(a) => (sweep::cmd_mu(a)?, a.common.out.as_deref()),
        Command::Pvi(a) => (sweep::cmd_pvi(a)?, a.common.out.as_deref()),
        Command::Verify(a) => (suites::cmd_verify(a)?, a.common.out.as_deref()),
    })
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let merged = match args::merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(merged) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    let (outcome, out) = match dispatch(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    for d in &outcome.diagnostics {
        eprintln!("{d}");
    }
    let written = match out {
        Some(path) => std::fs::write(path, &outcome.body)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(outcome.body.as_bytes())
            .map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_FAIL;
    }
    eprintln!("finished in {:.2} s", started.elapsed().as_secs_f64());
    outcome.exit_code()
}
