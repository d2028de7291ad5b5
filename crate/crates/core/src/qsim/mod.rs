//! Minimal dense state-vector simulator with the protocol's error channels.

mod noise;
mod rng;
mod state;

pub use noise::{
    apply_noisy_cnot, measure_with_errors, readout_only, CnotFault, ErrorModel, FlipRates,
    MeasurementRecord, QubitNoise,
};
pub use rng::{splitmix64, RngStream, RNG_ALGORITHM};
pub use state::{qubit_fidelity, single_qubit, Gate, StateVector, MAX_QUBITS, STATE_TOL};
