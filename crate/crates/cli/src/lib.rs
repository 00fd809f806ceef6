//! Command-line front end: structure files, subcommands and reports.

mod commands;
pub mod format;
pub mod report;

pub use commands::{run, Cli};
