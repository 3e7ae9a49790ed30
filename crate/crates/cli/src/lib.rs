//! Command-line front end and HTTP service for `chordgen-core`.

pub mod commands;
pub mod server;

pub use commands::{run, Cli, Command};
