//! Real-time measurement error mitigation for one-way quantum computation.
//!
//! A measured qubit is copied into a small verification register before its
//! measurement; the target and every register qubit are then measured and a
//! majority vote over all `N = #V + 1` outcomes decides the feedforward
//! correction. This crate provides:
//!
//! - [`analytics`]: misidentification probabilities, register sizing,
//!   CNOT-noise effective errors and the improvement regimes.
//! - [`qsim`]: a small dense state-vector simulator with projection, readout
//!   and noisy-CNOT error channels.
//! - [`owqc`]: the two-qubit graph-state gate with the verification protocol.
//! - [`montecarlo`]: a seeded, parallel experiment harness producing
//!   [`montecarlo::SweepTable`]s, plus comparison against predictions.

pub mod analytics;
pub mod error;
pub mod montecarlo;
pub mod owqc;
pub mod qsim;

pub use error::{Error, Result};
