use thiserror::Error;

/// Errors produced by the analytics, simulator, and experiment harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside the allowed domain ({allowed})")]
    Domain {
        name: &'static str,
        value: f64,
        allowed: &'static str,
    },

    #[error("no odd vote count up to {cap} reaches the requested misidentification bound")]
    CapExceeded { cap: u32 },

    #[error("no sign change found while bracketing {what}")]
    NoRoot { what: &'static str },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("qubit index {index} out of range for a {n_qubits}-qubit state")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("gate targets must be distinct (got qubit {0} twice)")]
    DuplicateQubit(usize),

    #[error("{requested} qubits requested, simulator supports at most {max}")]
    TooManyQubits { requested: usize, max: usize },

    #[error("qubit {0} is not in a computational basis state; it cannot be reset")]
    NotDisentangled(usize),

    #[error("measurement branch probability underflowed to zero")]
    NormCollapse,

    #[error("majority vote needs an odd number of votes, got {0}")]
    EvenVoteCount(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("row is missing parameter `{0}` required by the predictor")]
    MissingParam(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            allowed: "[0, 1]",
        })
    }
}
