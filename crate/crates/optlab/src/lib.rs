//! Reproducible experiment runner on top of `optlab-core`.

pub mod config;
pub mod error;
pub mod experiments;
pub mod manifest;
pub mod svg;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use experiments::{registry, run_experiment};
pub use manifest::Manifest;
