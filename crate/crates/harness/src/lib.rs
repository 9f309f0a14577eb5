//! Stress harness and command-line front end for the four-slot workbench.
//!
//! [`run_stress`] drives the real library from two threads, [`Report`]
//! is the JSON/text report shared by every subcommand, and [`cli_main`] is
//! the `acm` binary.

mod cli;
mod demo;
mod report;
mod stress;

pub use cli::{cli_main, run_cli};
pub use demo::run_demo;
pub use report::{emit_report, Format, Report, Verdict, VerdictStatus, TOOL_VERSION};
pub use stress::{run_stress, Latency, Pacing, ReadObservation, StressConfig, StressReport};

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Acm(#[from] acm::AcmError),
    #[error(transparent)]
    Explorer(#[from] acm_explorer::ExplorerError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("report JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot write report to {path}: {source}")]
    Sink { path: PathBuf, source: std::io::Error },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0} thread panicked; run aborted")]
    AgentPanic(&'static str),
}
