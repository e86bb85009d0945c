//! Command-line front end: argument parsing, file formats and commands.

pub mod args;
pub mod commands;
pub mod payload;
pub mod seqfile;

pub use args::Cli;
pub use commands::{exit_code_for, run, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
