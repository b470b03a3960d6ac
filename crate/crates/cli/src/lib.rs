//! Configuration, orchestration and serialization for the `hirota` binary.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{CliError, Context};
pub use config::{Format, RunConfig};
