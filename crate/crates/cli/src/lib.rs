//! Front end for `crnkit-core`: loads networks written in the reaction DSL,
//! runs the exact and numerical analyses, and renders text, CSV or JSON.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;

pub use args::Cli;
pub use commands::{run, Output};
pub use error::{exit, CliError};
