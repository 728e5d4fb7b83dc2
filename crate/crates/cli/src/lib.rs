//! Command-line front end for the squeezed-reservoir simulator.

// `!(x >= 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod output;

pub use error::CliError;
