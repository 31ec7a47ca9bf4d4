//! Command-line harness for squeezejc: scenario configs, figure presets,
//! CSV datasets and the oracle cross-check suite.

pub mod config;
pub mod error;
pub mod format;
pub mod presets;
pub mod run;

pub use error::{CliError, Result};
