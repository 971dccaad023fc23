//! Command-line runner: configuration, the `generate`, `width`, `solve` and
//! `catenoid-check` commands, and their exit codes.

pub mod commands;
pub mod config;
pub mod error;

pub use commands::{cmd_catenoid_check, cmd_generate, cmd_solve, cmd_width};
pub use config::{KeyValues, RunConfig};
pub use error::CliError;
