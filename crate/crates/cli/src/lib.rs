//! Command-line front end: experiment configs, reports and the acceptance
//! suite.

pub mod config;
pub mod error;
pub mod parse;
pub mod report;
pub mod run;
pub mod suite;

pub use config::{ExperimentConfig, Operation};
pub use error::{CliError, CliResult, ExitStatus};
pub use report::Report;
pub use run::run;
pub use suite::{suite, Scale, SuiteOptions, SuiteReport};
