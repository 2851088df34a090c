//! Experiment driver: JSON configs in, CSV or JSON reports out.

pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use experiments::run;
pub use report::{Cell, Report, Table};
