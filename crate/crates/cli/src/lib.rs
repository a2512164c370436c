//! Experiment harness behind the `swipt` binary: sweeps over receive-array sizes,
//! single-instance solving, and the property suites.

pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod solve;
pub mod verify;

pub use config::{Algorithm, CgOverrides, ExperimentConfig, PcRule};
pub use error::{CliError, Result};
pub use experiment::{run_experiment, ExperimentRow, TrialOutcome};
pub use output::{csv_string, format_sig, write_csv, write_jsonl, CSV_HEADER};
pub use solve::{generate_problem, load_problem, solve_problem, SolveOptions, SolveOutput};
pub use verify::{run_suite, Suite, VerifyOptions};
