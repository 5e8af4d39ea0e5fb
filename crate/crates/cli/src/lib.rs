//! Experiment runner for the subdiffusion toolkit: run configurations,
//! CSV output, decay tables and the command-line subcommands.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod runner;
pub mod tables;

pub use config::{InitialCase, PdeConfig, SchemeName};
pub use error::{CliError, CliResult};
pub use output::CsvTable;
pub use runner::{run, RunOutcome, RunReport};
