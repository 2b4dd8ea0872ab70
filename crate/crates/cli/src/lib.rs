//! Reproducible, file-emitting experiment commands built on `depolar-core`.
//!
//! Every command writes its data files plus a `manifest.json` into the
//! output directory. Data files depend only on the flags and the seed.

pub mod args;
pub mod bench;
pub mod encode;
pub mod manifest;
pub mod sweep;
pub mod train;
pub mod verify;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use args::{Cli, Command};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "DEPOLAR_SIM_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or unusable input; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// A property, count or numerical check failed; exit code 1.
    #[error("{0}")]
    Failure(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) | CliError::Io { .. } => 1,
        }
    }
}

impl From<depolar_core::Error> for CliError {
    fn from(e: depolar_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Outcome of a command: the files it wrote and whether its checks passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub artifacts: Vec<PathBuf>,
    pub passed: bool,
    /// Human-readable result, printed by the binary.
    pub report: String,
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Verify(a) => verify::run(a),
        Command::Sweep(a) => sweep::run(a),
        Command::Train(a) => train::run(a),
        Command::Bench(a) => bench::run(a),
        Command::EncodeViz(a) => encode::run(a),
    }
}

pub(crate) fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Worker pool honouring [`THREADS_ENV`]; unset or invalid means rayon's
/// default.
pub(crate) fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Failure(format!("cannot start worker pool: {e}")))
}

pub(crate) fn check_rates(ps: &[f64]) -> CliResult<()> {
    for &p in ps {
        depolar_core::channels::check_rate(p)?;
    }
    Ok(())
}

/// Binary Iris subset from `path`, or the bundled copy.
pub fn load_dataset(path: Option<&Path>) -> CliResult<depolar_core::data::Dataset> {
    let rows = match path {
        Some(p) => depolar_core::data::load_iris(p)?,
        None => depolar_core::data::parse_iris(depolar_core::data::BUNDLED_IRIS)?,
    };
    Ok(depolar_core::data::select_binary(&rows)?)
}
