use serde::{Deserialize, Serialize};

use super::calibration::CalibrationFile;
use crate::analytics::FanOut;
use crate::error::{check_probability, Error, Result};
use crate::owqc::ProtocolOptions;
use crate::qsim::MAX_QUBITS;

/// Runs per repetition at desk scale.
pub const DESK_RUNS: u64 = 1000;
/// Repetitions at desk scale; 100 × 1000 = 10^5 samples per grid point.
pub const DESK_REPETITIONS: u64 = 100;
/// Repetitions at full scale (1000 runs × 10000 repetitions).
pub const FULL_REPETITIONS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// One qubit in a random basis state read out `N` times; majority of the
    /// records against the true bit.
    ReadoutVoting,
    /// Graph state plus verification register; wrong verdict rate.
    ProjectionMitigation,
    /// Full gate with correction and final readout of C.
    OwqcEndToEnd,
    /// No sampling: `misid_prob(N, r̃)` with the fan-out's effective error.
    AnalyticSweep,
    /// `Bernoulli(q)` draws, for checking the estimator itself.
    Bernoulli,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ReadoutVoting => "readout_voting",
            Self::ProjectionMitigation => "projection_mitigation",
            Self::OwqcEndToEnd => "owqc_end_to_end",
            Self::AnalyticSweep => "analytic_sweep",
            Self::Bernoulli => "bernoulli",
        }
    }

    pub(crate) fn uses(self, axis: Axis) -> bool {
        use Axis::*;
        match self {
            Self::ReadoutVoting => matches!(axis, R | RegisterSize),
            Self::ProjectionMitigation | Self::OwqcEndToEnd => {
                matches!(axis, P | R | Gamma | RegisterSize | Topology | Alpha)
            }
            Self::AnalyticSweep => matches!(axis, P | R | Gamma | RegisterSize | Topology),
            Self::Bernoulli => axis == Q,
        }
    }

    pub(crate) fn simulates_circuit(self) -> bool {
        matches!(self, Self::ProjectionMitigation | Self::OwqcEndToEnd)
    }
}

/// What counts as a failure in `owqc_end_to_end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Continuation overlap with the desired state below 1/2.
    #[default]
    Misidentification,
    /// Final readout of C after undoing the gate is 1.
    WrongOutput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Axis {
    P,
    R,
    Gamma,
    RegisterSize,
    Topology,
    Alpha,
    Q,
}

/// Lists of values; the grid is their Cartesian product in the field order
/// below. An empty list falls back to a single default (0 for rates and
/// register size, linear fan-out), except `alpha`, where empty means a fresh
/// uniform angle per repetition, and `q`, which is required by `bernoulli`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterGrid {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub r: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gamma: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub register_sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub topologies: Vec<FanOut>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alpha: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub q: Vec<f64>,
}

impl ParameterGrid {
    fn axis_len(&self, axis: Axis) -> usize {
        match axis {
            Axis::P => self.p.len(),
            Axis::R => self.r.len(),
            Axis::Gamma => self.gamma.len(),
            Axis::RegisterSize => self.register_sizes.len(),
            Axis::Topology => self.topologies.len(),
            Axis::Alpha => self.alpha.len(),
            Axis::Q => self.q.len(),
        }
    }
}

fn axis_name(axis: Axis) -> &'static str {
    match axis {
        Axis::P => "p",
        Axis::R => "r",
        Axis::Gamma => "gamma",
        Axis::RegisterSize => "register_sizes",
        Axis::Topology => "topologies",
        Axis::Alpha => "alpha",
        Axis::Q => "q",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub grid: ParameterGrid,
    /// Shots per repetition.
    pub runs: u64,
    /// Independently seeded batches of `runs` shots.
    pub repetitions: u64,
    pub master_seed: u64,
    #[serde(default)]
    pub options: ProtocolOptions,
    #[serde(default)]
    pub metric: Metric,
    /// Per-qubit and per-pair rates replacing the `p`, `r`, `gamma` axes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationFile>,
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let config: Self =
            serde_json::from_str(s).map_err(|e| Error::Config(format!("experiment config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 || self.repetitions == 0 {
            return Err(Error::Config("runs and repetitions must both be at least 1".into()));
        }
        let kind = self.kind;
        let g = &self.grid;
        for axis in [Axis::P, Axis::R, Axis::Gamma, Axis::RegisterSize, Axis::Topology, Axis::Alpha, Axis::Q] {
            if g.axis_len(axis) > 0 && !kind.uses(axis) {
                return Err(Error::Config(format!(
                    "`{}` is not a parameter of {}",
                    axis_name(axis),
                    kind.as_str()
                )));
            }
        }
        for (name, values) in [("p", &g.p), ("r", &g.r), ("gamma", &g.gamma), ("q", &g.q)] {
            for &v in values.iter() {
                check_probability(name, v)?;
            }
        }
        if kind == ExperimentKind::Bernoulli && g.q.is_empty() {
            return Err(Error::Config("bernoulli needs at least one `q`".into()));
        }
        if let Some(&bad) = g.alpha.iter().find(|a| !a.is_finite()) {
            return Err(Error::Config(format!("alpha = {bad} is not finite")));
        }
        for &size in &g.register_sizes {
            if (size + 1) % 2 == 0 {
                return Err(Error::EvenVoteCount(size + 1));
            }
            if kind.simulates_circuit() && size + 2 > MAX_QUBITS {
                return Err(Error::TooManyQubits {
                    requested: size + 2,
                    max: MAX_QUBITS,
                });
            }
        }
        if let Some(cal) = &self.calibration {
            if !kind.simulates_circuit() {
                return Err(Error::Config(format!("{} does not take a calibration", kind.as_str())));
            }
            if !(g.p.is_empty() && g.r.is_empty() && g.gamma.is_empty()) {
                return Err(Error::Config(
                    "p, r and gamma come from the calibration and must not be listed".into(),
                ));
            }
            cal.validate()?;
            let needed = 2 + g.register_sizes.iter().copied().max().unwrap_or(0);
            if cal.qubits.len() < needed {
                return Err(Error::Config(format!(
                    "calibration lists {} qubits, the largest circuit needs {needed}",
                    cal.qubits.len()
                )));
            }
        }
        Ok(())
    }

    /// `#V ∈ {2, 4, 6}`, `p ∈ {0.01, …, 0.05}`, `r = γ = 0`, desk or full
    /// sampling.
    pub fn fig5_preset(master_seed: u64, full_scale: bool) -> Self {
        Self {
            kind: ExperimentKind::ProjectionMitigation,
            grid: ParameterGrid {
                p: vec![0.01, 0.02, 0.03, 0.04, 0.05],
                register_sizes: vec![2, 4, 6],
                ..Default::default()
            },
            runs: DESK_RUNS,
            repetitions: if full_scale { FULL_REPETITIONS } else { DESK_REPETITIONS },
            master_seed,
            options: ProtocolOptions::default(),
            metric: Metric::Misidentification,
            calibration: None,
        }
    }

    /// Every error rate zero; all rates come out exactly 0.
    pub fn zero_noise_preset(master_seed: u64) -> Self {
        Self {
            grid: ParameterGrid {
                register_sizes: vec![0, 2, 4, 6],
                ..Default::default()
            },
            repetitions: 10,
            ..Self::fig5_preset(master_seed, false)
        }
    }

    /// Wrong-output frequency with and without a two-qubit register at
    /// `p = 0.05`, `r = 0.02`, `γ = 0.005`, 100 random angles × 4096 shots.
    pub fn fig7_preset(master_seed: u64) -> Self {
        Self {
            kind: ExperimentKind::OwqcEndToEnd,
            grid: ParameterGrid {
                p: vec![0.05],
                r: vec![0.02],
                gamma: vec![0.005],
                register_sizes: vec![0, 2],
                ..Default::default()
            },
            runs: 4096,
            repetitions: 100,
            master_seed,
            options: ProtocolOptions::default(),
            metric: Metric::WrongOutput,
            calibration: None,
        }
    }
}
