//! Experiment harness around `hobo-core`: configuration, the experiments,
//! and their on-disk outputs.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod runner;

pub use config::{Band, ExperimentConfig, ExperimentKind, ModelName, ProfileName};
pub use error::{LabError, Result};
