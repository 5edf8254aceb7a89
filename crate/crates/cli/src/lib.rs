//! Scenario registry, configuration and report emission for the `orbifold`
//! command-line runner.

pub mod checks;
pub mod config;
pub mod error;
pub mod run;
pub mod scenarios;

pub use config::{Config, ParamOverrides, SCHEMA_VERSION};
pub use error::{CliError, CliResult};
pub use run::{config_for, execute, plan, write_outputs, Plan, Report, RunOptions, RunOutput};
pub use scenarios::{list_scenarios, load_registry, Registered, BUILTINS};
