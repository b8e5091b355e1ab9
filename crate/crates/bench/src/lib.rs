//! Benchmark experiments for the `rodsim-core` rod element, with CSV and SVG output.

pub mod config;
pub mod error;
pub mod experiments;
pub mod metrics;
pub mod output;

pub use config::Config;
pub use error::{BenchError, BenchResult};
pub use experiments::Experiment;
