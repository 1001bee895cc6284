//! Scenario runner for the plasmonic entanglement simulator: TOML scenario
//! and spectrum files in, CSV tables and JSON reports out.

pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod spectrum;
pub mod sweep;

pub use config::{load_scenario, parse_scenario, Scenario};
pub use error::{HarnessError, Result};
pub use run::{run_scenario, Overrides, RunReport};
pub use spectrum::{spectrum_command, SpectrumConfig};
pub use sweep::{calibrate, set_path, sweep};
