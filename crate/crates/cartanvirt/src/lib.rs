//! Command-line front end, space files and report formats for
//! [`cartanvirt_core`].
//!
//! Exit codes are 0 when every check passes, 1 when some identity exceeds its
//! tolerance and 2 for usage or configuration errors.

pub mod cli;
pub mod commands;
pub mod error;
pub mod output;
pub mod space;

pub use commands::{Format, Options, Outcome};
pub use error::{CliError, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};
