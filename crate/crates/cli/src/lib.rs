//! Suite runner for the `prolim` command: configuration, execution and
//! deterministic report serialization.

mod config;
mod report;
mod run;

use std::fmt;

pub use config::{ChainChoice, Samples, Suite, SuiteConfig};
pub use report::{emit_report, Format};
pub use run::{run_suite, RunOptions, Summary, SuiteReport};

/// A configuration that cannot be run. Maps to exit code 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Exit code for configuration errors.
pub const EXIT_CONFIG: i32 = 2;
