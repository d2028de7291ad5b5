//! Measurement and CNOT error channels.
//!
//! A measurement first collapses the full state by the Born rule onto the
//! true branch `b`. A projection error then flips only the measured qubit
//! to `|¬b⟩`, leaving its entangled partners in branch `b`. Finally a
//! readout error may flip the classical record.

use serde::{Deserialize, Serialize};

use super::rng::RngStream;
use super::state::{Gate, StateVector};
use crate::error::{check_probability, Result};

/// Flip probabilities conditioned on the bit being flipped.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlipRates {
    /// Probability that a 0 turns into a 1.
    pub from_zero: f64,
    /// Probability that a 1 turns into a 0.
    pub from_one: f64,
}

impl FlipRates {
    pub const NONE: FlipRates = FlipRates {
        from_zero: 0.0,
        from_one: 0.0,
    };

    pub fn symmetric(p: f64) -> Result<Self> {
        Self::asymmetric(p, p)
    }

    pub fn asymmetric(from_zero: f64, from_one: f64) -> Result<Self> {
        check_probability("from_zero", from_zero)?;
        check_probability("from_one", from_one)?;
        Ok(Self {
            from_zero,
            from_one,
        })
    }

    pub fn for_bit(&self, bit: u8) -> f64 {
        if bit == 0 {
            self.from_zero
        } else {
            self.from_one
        }
    }

    /// The larger of the two rates.
    pub fn worst_case(&self) -> f64 {
        self.from_zero.max(self.from_one)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("from_zero", self.from_zero)?;
        check_probability("from_one", self.from_one)?;
        Ok(())
    }
}

/// Projection and readout error of one physical qubit.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QubitNoise {
    pub projection: FlipRates,
    pub readout: FlipRates,
}

/// Noise for a whole circuit: per-qubit measurement errors and the per-CNOT
/// branch-flip probability γ.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorModel {
    pub default: QubitNoise,
    /// Overrides by simulator qubit index; qubits past the end use `default`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_qubit: Vec<QubitNoise>,
    pub gamma: f64,
    /// Overrides of γ for specific `(control, target)` pairs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_pair: Vec<((usize, usize), f64)>,
}

impl ErrorModel {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn uniform(projection: f64, readout: f64, gamma: f64) -> Result<Self> {
        check_probability("gamma", gamma)?;
        Ok(Self {
            default: QubitNoise {
                projection: FlipRates::symmetric(projection)?,
                readout: FlipRates::symmetric(readout)?,
            },
            per_qubit: Vec::new(),
            gamma,
            per_pair: Vec::new(),
        })
    }

    pub fn qubit(&self, q: usize) -> QubitNoise {
        self.per_qubit.get(q).copied().unwrap_or(self.default)
    }

    pub fn gamma_for(&self, control: usize, target: usize) -> f64 {
        self.per_pair
            .iter()
            .find(|(pair, _)| *pair == (control, target))
            .map(|(_, g)| *g)
            .unwrap_or(self.gamma)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("gamma", self.gamma)?;
        for n in std::iter::once(&self.default).chain(&self.per_qubit) {
            n.projection.validate()?;
            n.readout.validate()?;
        }
        for (_, g) in &self.per_pair {
            check_probability("gamma", *g)?;
        }
        Ok(())
    }
}

/// Outcome of one noisy measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasurementRecord {
    /// What the apparatus reported.
    pub recorded_bit: u8,
    /// Branch selected by the Born rule (simulation-only ground truth).
    pub true_branch: u8,
    /// State the qubit was left in after a possible projection error.
    pub projected_bit: u8,
}

/// Measures `qubit` in the computational basis through the projection and
/// readout channels.
pub fn measure_with_errors(
    state: &mut StateVector,
    qubit: usize,
    projection: FlipRates,
    readout: FlipRates,
    rng: &mut RngStream,
) -> Result<MeasurementRecord> {
    let true_branch = state.measure(qubit, rng)?;
    let projected_bit = if rng.bernoulli(projection.for_bit(true_branch)) {
        state.apply(Gate::X(qubit))?;
        1 - true_branch
    } else {
        true_branch
    };
    let recorded_bit = if rng.bernoulli(readout.for_bit(projected_bit)) {
        1 - projected_bit
    } else {
        projected_bit
    };
    Ok(MeasurementRecord {
        recorded_bit,
        true_branch,
        projected_bit,
    })
}

/// `n_reads` repeated readouts of an already-projected qubit.
pub fn readout_only(bit: u8, readout: FlipRates, n_reads: usize, rng: &mut RngStream) -> Vec<u8> {
    let flip = readout.for_bit(bit);
    (0..n_reads)
        .map(|_| if rng.bernoulli(flip) { 1 - bit } else { bit })
        .collect()
}

/// Which Pauli a faulty CNOT applies to its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CnotFault {
    /// `Z` on the target: swaps `Φ+ ↔ Φ-` for a `|±⟩` control.
    PhaseFlip,
    /// `X` on the target: the copied computational-basis bit is wrong.
    #[default]
    BitFlip,
}

/// Ideal CNOT followed, with probability `gamma`, by the fault Pauli on the
/// target. Returns whether the fault fired.
pub fn apply_noisy_cnot(
    state: &mut StateVector,
    control: usize,
    target: usize,
    gamma: f64,
    fault: CnotFault,
    rng: &mut RngStream,
) -> Result<bool> {
    check_probability("gamma", gamma)?;
    state.apply(Gate::Cnot { control, target })?;
    let fired = rng.bernoulli(gamma);
    if fired {
        match fault {
            CnotFault::PhaseFlip => state.apply(Gate::Z(target))?,
            CnotFault::BitFlip => state.apply(Gate::X(target))?,
        }
    }
    Ok(fired)
}
