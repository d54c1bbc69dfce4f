//! Parallel drivers, experiment configuration and CSV export on top of
//! [`afdm_core`], plus the pipelines used by the `afdm` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod export;
pub mod par;

pub use config::{ExperimentConfig, Resolved};
pub use error::{CliError, CliResult};
pub use export::Table;
