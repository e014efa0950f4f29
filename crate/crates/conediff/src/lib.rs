//! Configuration, orchestration and file formats around `conediff-core`.

pub mod config;
pub mod report;
pub mod runner;
pub mod series;
pub mod snapshot;
pub mod svg;
pub mod sweep;

pub use config::{parse_config, ConfigError, RunConfig};
pub use report::{build_report, Report};
pub use runner::{execute, write_outputs, AppError, Execution, Exit};
