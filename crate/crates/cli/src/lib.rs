//! Experiment files, grid runner and plot data export for `relaysel`.

pub mod config;
pub mod error;
pub mod plot;
pub mod runner;

pub use config::{parse_config, serialize, Experiment, Mode, SnrGrid, Warmup};
pub use error::{CliError, Result};
pub use plot::{emit_plotdata, read_csv};
pub use runner::{run_experiment, write_csv, ResultRow};
