//! Scenario-file front end for `onq-core`.
//!
//! A scenario is a TOML file whose tables describe the nuclide, fields,
//! cavities, ensemble, protocol and feasibility inputs. Every physical
//! quantity is a `{ value, unit }` pair; see [`units::Unit`] for the
//! accepted tags.

pub mod commands;
pub mod config;
pub mod error;
pub mod resolve;
pub mod scenarios;
pub mod sweep;
pub mod units;

pub use commands::{run, Report, RunOptions};
pub use config::{CommandKind, Scenario, ScenarioConfig};
pub use error::{CliError, CliResult};
pub use sweep::{SweepScale, SweepSpec};
