//! Library side of the `dipolar-qb` command: configuration, scenario
//! execution and CSV/plot output.

pub mod config;
pub mod error;
pub mod output;
pub mod scenario;

pub use config::{AxisSpec, AxisValues, InitialState, Scenario, ScenarioConfig};
pub use error::{CliError, CliResult};
pub use output::{emit_plot_script, Table};
pub use scenario::{run, run_with_jobs};
