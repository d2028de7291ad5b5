//! Seeded, parallel experiments and figure tables.
//!
//! An [`ExperimentConfig`] expands into a grid; every grid point runs
//! `repetitions` independently seeded batches of `runs` shots, and the row
//! value is the mean of the per-batch failure rates with its standard error.

pub mod analytic;
mod calibration;
mod compare;
mod config;
mod run;
mod table;

pub use calibration::{CalibratedQubit, CalibrationFile, CnotPair, CALIBRATION_SCHEMA};
pub use compare::{compare_to_prediction, compare_with, ComparisonReport, ComparisonRow, Predictor, PASS_Z};
pub use config::{
    ExperimentConfig, ExperimentKind, Metric, ParameterGrid, DESK_REPETITIONS, DESK_RUNS,
    FULL_REPETITIONS,
};
pub use run::{mean_and_sem, run_experiment, run_experiment_with_workers};
pub use table::{
    config_hash, format_float, ParamValue, Params, SweepRow, SweepTable, TableFormat, TableMetadata,
};

/// Per-vote error of independent projection and readout flips, `p + r - 2pr`.
pub fn combined_error(p: f64, r: f64) -> f64 {
    p + r - 2.0 * p * r
}
