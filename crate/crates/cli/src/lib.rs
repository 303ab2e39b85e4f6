//! Command-line front end for the pursuit simulator: scenario execution
//! and parameter sweeps driven by flat config files, with CSV logs and
//! JSON metrics as the output contract.

pub mod app;
pub mod config;
pub mod output;

pub use app::{run_cli, EXIT_CONFIG, EXIT_IO, EXIT_OK};
pub use config::{parse_config, ConfigError};
