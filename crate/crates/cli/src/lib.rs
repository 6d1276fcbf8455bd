//! Declarative experiment runner for the `wconv_core` checks.
//!
//! A JSON config names weights, weight families, grid functions and
//! measures, then lists suites that apply registered checks to them. Every
//! name is resolved before any suite runs; suites run independently and the
//! report keeps their declaration order.

pub mod catalog;
pub mod checks;
pub mod config;
pub mod runner;

pub use catalog::{list_builtins, Catalog};
pub use config::{ConfigError, ExperimentConfig, SuiteSpec};
pub use runner::{run, RunReport, Status};

/// Default experiment config, also shipped as `configs/default.json`.
pub const DEFAULT_CONFIG: &str = include_str!("../configs/default.json");

/// Resolves and runs a config.
pub fn run_config(config: &ExperimentConfig) -> Result<RunReport, ConfigError> {
    let resolved = config.resolve()?;
    Ok(run(&resolved, config.seed))
}
