//! Experiment runner that instantiates the sparse-digit smoothness statements
//! at desk scale and writes reproducible CSV or JSON reports.

pub mod config;
pub mod error;
pub mod experiments;
pub mod logs;
pub mod report;

pub use config::{ExperimentConfig, ExperimentId, OutputFormat};
pub use error::HarnessError;
pub use report::{Cell, Report};
