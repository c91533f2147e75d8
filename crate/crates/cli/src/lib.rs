//! Library side of the `pshift` command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod report;
pub mod run;
pub mod selftest;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use report::{Payload, Report, Status};
pub use run::run;
