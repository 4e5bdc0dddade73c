//! Benchmark harness for zeroth-order optimizers: experiment configuration,
//! multi-seed orchestration, CSV trace persistence, summary statistics, and
//! static SVG convergence plots.
//!
//! The `zo-bench` binary is a thin wrapper over this library; integration
//! tests drive [`runner::execute`] directly.

use std::path::PathBuf;

pub mod cli;
pub mod config;
pub mod plot;
pub mod runner;
pub mod sweep;
pub mod trace_io;

pub use config::{ExperimentConfig, Theta0Policy};
pub use runner::{execute, ExperimentOutput, RunSummary};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    /// A configuration field failed validation; names the offending field.
    #[error("invalid {field}: {message}")]
    Config { field: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Core(#[from] zo_opt::Error),
}

impl BenchError {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        BenchError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.into(),
            source,
        }
    }
}
