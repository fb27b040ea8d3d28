//! Command-line front end for `bangbang-core`: figure presets, TOML run
//! configurations, CSV and plot-script output, and the oracle comparison
//! suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod suite;

pub use commands::{run, Cli, Status};
pub use error::{CliError, CliResult};
