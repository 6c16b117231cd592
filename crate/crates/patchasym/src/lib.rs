//! Sweeps, fits, reports and the command line around `patchasym-core`.

pub mod config;
pub mod error;
pub mod record;
pub mod scenarios;
pub mod sweep;

pub use config::{Config, Scenario};
pub use error::{HarnessError, Result};
pub use record::SweepRecord;
pub mod acceptance;
pub mod dump;
pub mod report;
