//! Command-line front end, experiment runners and acceptance suites for
//! `fqt-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod oracles;
pub mod report;
pub mod suites;

pub use cli::main_with_args;
pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use report::ExperimentReport;
