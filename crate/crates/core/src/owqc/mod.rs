//! The one-way gate `HRz(α)` on `|+⟩` with a verification register.
//!
//! Qubit layout in every simulated circuit: the target `T` is qubit 0, the
//! continuation `C` is qubit 1 and verification qubit `V_j` (1-based) is
//! qubit `j + 1`.

mod schedule;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::analytics::FanOut;
use crate::error::{Error, Result};
use crate::qsim::{
    apply_noisy_cnot, measure_with_errors, qubit_fidelity, CnotFault, ErrorModel, Gate,
    MeasurementRecord, RngStream, StateVector, STATE_TOL,
};

pub use schedule::{fan_out_schedule, vote_depths};

pub const TARGET: usize = 0;
pub const CONTINUATION: usize = 1;

/// Simulator index of verification qubit `V_j`, `j >= 1`.
pub fn verification_qubit(j: usize) -> usize {
    j + 1
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `|±α⟩ = Rz(-α)|±⟩ = (|0⟩ ± e^{-iα}|1⟩)/√2`; `sign_bit = 0` is `|+α⟩`.
pub fn alpha_basis_state(alpha: f64, sign_bit: u8) -> [Complex64; 2] {
    let sign = if sign_bit == 0 { 1.0 } else { -1.0 };
    [
        c(FRAC_1_SQRT_2, 0.0),
        Complex64::from_polar(sign * FRAC_1_SQRT_2, -alpha),
    ]
}

/// Desired continuation state `HRz(α)|+⟩`.
pub fn continuation_target(alpha: f64) -> [Complex64; 2] {
    let e = Complex64::from_polar(1.0, alpha);
    [(c(1.0, 0.0) + e) * 0.5, (c(1.0, 0.0) - e) * 0.5]
}

/// Two-qubit graph state on `{T, C}` with its gate angle.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphStateTC {
    pub state: StateVector,
    pub alpha: f64,
}

/// `(|α⟩ ⊗ HRz(α)|+⟩ + |-α⟩ ⊗ XHRz(α)|+⟩)/√2`, prepared as `CZ (H ⊗ H)|00⟩`.
///
/// The decomposition of `CZ|++⟩` in T's `|±α⟩` basis leaves exactly these
/// two branches for every α; `alpha` only fixes the measurement basis.
pub fn prepare_graph_state(alpha: f64) -> Result<GraphStateTC> {
    let mut state = StateVector::new(2)?;
    state.apply_all(&[Gate::H(TARGET), Gate::H(CONTINUATION), Gate::Cz(TARGET, CONTINUATION)])?;
    Ok(GraphStateTC { state, alpha })
}

/// Register size and fan-out kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationTopology {
    pub kind: FanOut,
    pub register_size: usize,
}

impl VerificationTopology {
    pub fn new(kind: FanOut, register_size: usize) -> Self {
        Self {
            kind,
            register_size,
        }
    }

    pub fn votes(&self) -> usize {
        self.register_size + 1
    }
}

/// Whether measurements happen in the rotated `|±α⟩` basis or directly in
/// the computational basis after the CNOT fan-out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementMode {
    Rotated,
    #[default]
    Computational,
}

/// Which votes CNOT noise reaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaAccounting {
    /// Only verification votes pass through CNOTs; T's vote carries
    /// projection and readout error alone.
    #[default]
    RegisterOnly,
    /// T's record is additionally flipped with probability γ, so that every
    /// vote carries the same linear effective error.
    AllVotes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ProtocolOptions {
    #[serde(default)]
    pub mode: MeasurementMode,
    #[serde(default)]
    pub accounting: GammaAccounting,
}

/// Entangles T with the register ahead of T's measurement.
///
/// Rotated mode applies `(Rz(-α)H)_{T,V} · CNOT-schedule · (HRz(α))_T`;
/// computational mode stops after the CNOT schedule. Each CNOT faults with
/// the model's γ for that pair, as an `X` on its target.
pub fn attach_verification(
    state: &mut StateVector,
    topology: VerificationTopology,
    alpha: f64,
    noise: &ErrorModel,
    rng: &mut RngStream,
    mode: MeasurementMode,
) -> Result<()> {
    let needed = 2 + topology.register_size;
    if state.n_qubits() < needed {
        return Err(Error::QubitOutOfRange {
            index: needed - 1,
            n_qubits: state.n_qubits(),
        });
    }
    for j in 1..=topology.register_size {
        if state.prob_one(verification_qubit(j))? > STATE_TOL {
            return Err(Error::Config(format!(
                "verification qubit V_{j} is not initialized to |0⟩"
            )));
        }
    }
    if topology.register_size == 0 {
        return Ok(());
    }

    state.apply(Gate::Rz(TARGET, alpha))?;
    state.apply(Gate::H(TARGET))?;

    let qubit = |node: usize| if node == 0 { TARGET } else { verification_qubit(node) };
    for (from, to) in fan_out_schedule(topology.kind, topology.register_size) {
        let (control, target) = (qubit(from), qubit(to));
        let gamma = noise.gamma_for(control, target);
        apply_noisy_cnot(state, control, target, gamma, CnotFault::BitFlip, rng)?;
    }

    if mode == MeasurementMode::Rotated {
        let all = std::iter::once(TARGET).chain((1..=topology.register_size).map(verification_qubit));
        for q in all {
            state.apply(Gate::H(q))?;
            state.apply(Gate::Rz(q, -alpha))?;
        }
    }
    Ok(())
}

/// Majority vote over all `N` recorded bits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteResult {
    pub bits: Vec<u8>,
    pub verdict: u8,
    /// `|#0 - #1|`, at least 1 for odd `N`.
    pub margin: usize,
    pub records: Vec<MeasurementRecord>,
}

impl VoteResult {
    pub fn from_bits(bits: Vec<u8>, records: Vec<MeasurementRecord>) -> Result<Self> {
        if bits.len().is_multiple_of(2) {
            return Err(Error::EvenVoteCount(bits.len()));
        }
        let ones = bits.iter().filter(|&&b| b == 1).count();
        let zeros = bits.len() - ones;
        Ok(Self {
            verdict: u8::from(ones > zeros),
            margin: zeros.abs_diff(ones),
            bits,
            records,
        })
    }

    /// Branch T collapsed to (simulation ground truth).
    pub fn true_branch(&self) -> u8 {
        self.records[0].true_branch
    }
}

/// Measures T and every register qubit through the noise model and takes
/// the majority. In rotated mode each qubit is first rotated back with
/// `HRz(α)`.
pub fn mitigated_measure(
    state: &mut StateVector,
    register_size: usize,
    alpha: f64,
    noise: &ErrorModel,
    rng: &mut RngStream,
    options: ProtocolOptions,
) -> Result<VoteResult> {
    let votes = register_size + 1;
    if votes.is_multiple_of(2) {
        return Err(Error::EvenVoteCount(votes));
    }
    let mut bits = Vec::with_capacity(votes);
    let mut records = Vec::with_capacity(votes);
    let qubits = std::iter::once(TARGET).chain((1..=register_size).map(verification_qubit));
    for (i, q) in qubits.enumerate() {
        if options.mode == MeasurementMode::Rotated || register_size == 0 {
            state.apply(Gate::Rz(q, alpha))?;
            state.apply(Gate::H(q))?;
        }
        let qn = noise.qubit(q);
        let record = measure_with_errors(state, q, qn.projection, qn.readout, rng)?;
        let mut bit = record.recorded_bit;
        if i == 0 && register_size > 0 {
            let flip_target = rng.bernoulli(noise.gamma_for(TARGET, verification_qubit(1)));
            if options.accounting == GammaAccounting::AllVotes && flip_target {
                bit = 1 - bit;
            }
        }
        bits.push(bit);
        records.push(record);
    }
    VoteResult::from_bits(bits, records)
}

/// `X` on C iff the verdict names the `|-α⟩` branch.
pub fn apply_correction(state: &mut StateVector, continuation: usize, verdict: u8) -> Result<()> {
    if verdict == 1 {
        state.apply(Gate::X(continuation))?;
    }
    Ok(())
}

/// Result of one end-to-end run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotOutcome {
    /// Final computational readout of C after undoing the gate; 0 is correct.
    pub output_bit: u8,
    /// `|⟨HRz(α)+|C⟩|²` after correction, before the undo rotation.
    pub fidelity_to_target: f64,
    /// Fidelity below one half.
    pub misidentified: bool,
    pub verdict: u8,
    pub true_branch: u8,
}

/// Prepare, verify, vote, correct, then undo `HRz(α)` on C with `HRz(-α)H`
/// and read C out through its own noise channels.
pub fn run_owqc_shot(
    alpha: f64,
    noise: &ErrorModel,
    topology: VerificationTopology,
    rng: &mut RngStream,
    options: ProtocolOptions,
) -> Result<ShotOutcome> {
    let graph = prepare_graph_state(alpha)?;
    let mut state = if topology.register_size == 0 {
        graph.state
    } else {
        graph.state.tensor(&StateVector::new(topology.register_size)?)?
    };
    attach_verification(&mut state, topology, alpha, noise, rng, options.mode)?;
    let vote = mitigated_measure(&mut state, topology.register_size, alpha, noise, rng, options)?;
    apply_correction(&mut state, CONTINUATION, vote.verdict)?;

    let fidelity = qubit_fidelity(continuation_target(alpha), state.qubit_state(CONTINUATION)?);

    state.apply_all(&[
        Gate::H(CONTINUATION),
        Gate::Rz(CONTINUATION, -alpha),
        Gate::H(CONTINUATION),
    ])?;
    let cn = noise.qubit(CONTINUATION);
    let out = measure_with_errors(&mut state, CONTINUATION, cn.projection, cn.readout, rng)?;

    Ok(ShotOutcome {
        output_bit: out.recorded_bit,
        fidelity_to_target: fidelity,
        misidentified: fidelity < 0.5,
        verdict: vote.verdict,
        true_branch: vote.true_branch(),
    })
}

#[cfg(test)]
mod tests;
