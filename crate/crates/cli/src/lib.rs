//! Command-line driver for the `fracsource-core` solvers: configuration,
//! manufactured presets, run modes and report writing.

pub mod config;
pub mod error;
pub mod presets;
pub mod report;
pub mod run;
pub mod study;
pub mod verify;

pub use config::{Mode, RunConfig};
pub use error::{CliError, CliResult};
pub use run::{execute, RunOptions};
