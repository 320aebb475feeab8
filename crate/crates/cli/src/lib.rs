//! Verification suites, scans and file formats on top of `twinfield-core`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod serial;

pub use config::{Overrides, RunConfig};
pub use error::{CliError, Result};
