//! Experiment orchestration for noisy encoding-decoding circuits: quenched
//! sweeps, self-averaging studies, data collapse, device-noise runs, result
//! tables and the `encdec` command line.

pub mod cli;
pub mod collapse;
pub mod config;
pub mod error;
pub mod pipeline;
pub mod selfavg;
pub mod sweep;
pub mod table;
pub mod theory_export;

pub use config::{Backend, ExperimentConfig, ExperimentKind, InitialState, OutputFormat};
pub use error::{HarnessError, Result};
pub use sweep::{run_noisy_device, run_quenched_sweep, SweepResult};
pub use table::ResultTable;
