//! File formats, experiment harness and reporting for `vpcme-core`.
//!
//! * [`io`]: dense CSV datasets (features followed by 0/1 label columns).
//! * [`model_file`]: self-describing JSON model artifacts.
//! * [`harness`]: repeated k-fold cross-validation, parameter sweeps and
//!   method comparison with paired t-tests.
//! * [`report`]: the JSON report schema written by the CLI.
//! * [`synth`]: synthetic datasets for smoke tests and demos.

pub mod harness;
pub mod io;
pub mod model_file;
pub mod report;
pub mod synth;

pub use harness::{compare_methods, cross_validate, run_sweep, ExperimentConfig, Method, SweepParameter, SweepSpec};
pub use io::{load_csv, write_csv};
