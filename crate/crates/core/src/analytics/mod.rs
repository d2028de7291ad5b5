//! Closed-form mathematics of the majority-vote protocol.
//!
//! Everything here is a pure function of its arguments. Rates are plain
//! `f64` probabilities and vote counts plain `u32`; the newtypes below are
//! for callers that want validated values carried through their own
//! structures.

mod beta;
mod lambert;
mod regimes;
mod voting;

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

pub use beta::reg_inc_beta;
pub use lambert::lambert_w0;
pub use regimes::{
    best_n, classify_regime, critical_gamma_any, critical_gamma_initial, eps_with_cnot,
    first_improving_n, improvement_exists, DEFAULT_ANY_N_MAX, DEFAULT_GRID_N_MAX,
};
pub use voting::{
    effective_error, effective_error_for, effective_error_linear, misid_prob, misid_prob_est,
    misid_prob_poly, misid_prob_stirling, required_n_approx, required_n_exact,
    required_n_exact_capped, DEFAULT_N_CAP,
};

/// Per-readout flip probability.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReadoutError(f64);

impl ReadoutError {
    pub fn new(r: f64) -> Result<Self> {
        check_probability("r", r).map(Self)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Per-CNOT branch-flip probability γ.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CnotError(f64);

impl CnotError {
    pub fn new(gamma: f64) -> Result<Self> {
        check_probability("gamma", gamma).map(Self)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Number of voting outcomes, readouts or `#V + 1` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VoteCount(u32);

impl VoteCount {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain {
                name: "N",
                value: 0.0,
                allowed: "N >= 1",
            });
        }
        Ok(Self(n))
    }

    /// A vote count usable for a tie-free majority.
    pub fn odd(n: u32) -> Result<Self> {
        let v = Self::new(n)?;
        if n.is_multiple_of(2) {
            return Err(Error::EvenVoteCount(n as usize));
        }
        Ok(v)
    }

    pub fn from_register_size(register_size: u32) -> Self {
        Self(register_size + 1)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn register_size(self) -> u32 {
        self.0 - 1
    }
}

/// Per-vote error after CNOT-noise accumulation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EffectiveError(f64);

impl EffectiveError {
    pub(crate) fn from_clamped(r: f64) -> Self {
        Self(r.clamp(0.0, 1.0))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// How the verification register is populated from the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FanOut {
    /// Every verification qubit is a direct CNOT target of T.
    Linear,
    /// Doubling schedule; errors accumulate to depth `log2`.
    LogDepth,
}

impl FanOut {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::LogDepth => "log_depth",
        }
    }
}

impl std::fmt::Display for FanOut {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FanOut {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Self::Linear),
            "log-depth" | "log_depth" => Ok(Self::LogDepth),
            other => Err(Error::Config(format!(
                "unknown topology `{other}` (expected linear or log-depth)"
            ))),
        }
    }
}

/// Behavior of ε as the register grows for a given (r, γ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeLabel {
    #[serde(rename = "III_immediate_improvement")]
    ImmediateImprovement,
    #[serde(rename = "II_initial_worsening_then_improvement")]
    InitialWorseningThenImprovement,
    #[serde(rename = "I_no_improvement")]
    NoImprovement,
}

impl RegimeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ImmediateImprovement => "III_immediate_improvement",
            Self::InitialWorseningThenImprovement => "II_initial_worsening_then_improvement",
            Self::NoImprovement => "I_no_improvement",
        }
    }
}

impl std::fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
