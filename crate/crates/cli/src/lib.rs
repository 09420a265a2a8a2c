//! Command-line front end: argument parsing, subcommands and report files.

pub mod args;
pub mod commands;
pub mod report;

pub use args::{Cli, Command, Format};
pub use commands::{run, CliError};
pub use report::{read_report, write_report, ReportRow};
