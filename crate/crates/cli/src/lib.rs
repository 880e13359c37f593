//! File formats, result store and experiment harness around `gsemo-core`.

pub mod bundle;
pub mod config;
pub mod error;
pub mod experiment;
pub mod formats;
pub mod report;
pub mod store;
pub mod verify;

pub use error::{CliError, Result};
