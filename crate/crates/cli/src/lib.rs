//! Scenario-driven batch runs over `carrel-core`.
//!
//! A scenario file names a one-particle model, one or more inverse temperatures,
//! a list of excitations and the tasks to compute. [`run`] turns it into result
//! rows, optionally checked against the Fock-space oracle, and [`output`] writes
//! them as CSV or JSON.

pub mod output;
pub mod runner;
pub mod scenario;

use thiserror::Error;

pub use output::{write_rows, Format};
pub use runner::{run, Options, Row};
pub use scenario::{load_scenario, parse_scenario, BetaSweep, Overrides, Scenario, Task};

/// Oracle caps above this are refused outright.
pub const HARD_MAX_MODES: usize = 14;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl From<carrel_core::Error> for CliError {
    fn from(e: carrel_core::Error) -> Self {
        match e {
            carrel_core::Error::ResourceLimit(_) | carrel_core::Error::SizeLimit(_) => {
                CliError::Resource(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}
