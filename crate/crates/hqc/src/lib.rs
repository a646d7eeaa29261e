//! File formats and command handlers for the `hqc` tool.

pub mod angle;
pub mod cli;
pub mod error;
pub mod formats;

pub use cli::{execute, run, Cli};
pub use error::CliError;
