//! Command-line harness and persistence layer: config files, model files,
//! CSV episode logs, SVG charts, and the train/eval/compare/transfer
//! commands.

pub mod chart;
pub mod clock;
pub mod commands;
pub mod config;
pub mod episode_log;
pub mod error;
pub mod evaluation;
pub mod model;
pub mod summary;

pub use error::CliError;
