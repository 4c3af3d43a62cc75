//! Command-line front end: config handling, the six run modes and report
//! emission (CSV, JSON, SVG, manifest).
//!
//! [`run`] is the whole program; `main` only forwards `argv` and the exit code.

pub mod bundle;
pub mod chart;
pub mod config;
pub mod modes;
pub mod table;

use std::ffi::OsString;

use clap::Parser;
use starlab::StarError;

pub use bundle::{Bundle, Gate, Status};
pub use config::{Args, Mode, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_GATE: i32 = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("solver failure ({kind}): {message}")]
    Solver { kind: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Solver { .. } => EXIT_SOLVER,
        }
    }
}

/// Short stable name of an error variant, used in diagnostics.
pub fn error_kind(e: &StarError) -> &'static str {
    match e {
        StarError::InvalidParams(_) => "invalid-params",
        StarError::Domain(_) => "domain",
        StarError::UnsupportedModel(_) => "unsupported-model",
        StarError::Config(_) => "config",
        StarError::NoBoundary { .. } => "no-boundary",
        StarError::Stiffness { .. } => "stiffness",
        StarError::CriticalMassExceeded { .. } => "critical-mass-exceeded",
        StarError::Bracket(_) => "bracket",
        StarError::NonConvergence { .. } => "non-convergence",
        StarError::BackendMismatch(_) => "backend-mismatch",
        StarError::FitDomain(_) => "fit-domain",
    }
}

impl From<StarError> for CliError {
    fn from(e: StarError) -> Self {
        match e {
            StarError::InvalidParams(m) | StarError::Config(m) => CliError::Config(m),
            other => CliError::Solver {
                kind: error_kind(&other),
                message: other.to_string(),
            },
        }
    }
}

fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var("STARLAB_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!(
                "STARLAB_THREADS must be a positive integer, got '{s}'"
            ))),
        },
    }
}

fn execute(cfg: &RunConfig) -> Result<Status, CliError> {
    let mut bundle = Bundle::new(cfg);
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = thread_count()? {
            b = b.num_threads(n);
        }
        b.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))?
    };
    let outcome = pool.install(|| modes::run_mode(cfg, &mut bundle));
    if let Err(e) = &outcome {
        bundle.fail(e.to_string());
    }
    let status = bundle.write()?;
    outcome?;
    Ok(status)
}

/// Parses `argv` (program name first), runs the mode and returns the exit
/// code. Diagnostics go to stderr, one line each.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let first = e.to_string().lines().next().unwrap_or("invalid arguments").to_string();
            eprintln!("starlab: {first}");
            return EXIT_CONFIG;
        }
    };
    let cfg = match RunConfig::resolve(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("starlab: {e}");
            return e.exit_code();
        }
    };
    match execute(&cfg) {
        Ok(Status::Ok) => EXIT_OK,
        Ok(Status::GateFailed) => EXIT_GATE,
        Ok(Status::SolverFailed) => EXIT_SOLVER,
        Err(e) => {
            eprintln!("starlab: {e}");
            e.exit_code()
        }
    }
}
