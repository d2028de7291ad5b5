//! Register sizing per calibrated qubit.

use serde::{Deserialize, Serialize};

use mbqc_vote::analytics::{
    classify_regime, effective_error_for, misid_prob, required_n_exact, FanOut, RegimeLabel,
};
use mbqc_vote::montecarlo::{combined_error, CalibrationFile};
use mbqc_vote::{Error, Result};

/// Iteration cap for the `N ↦ r̃(N) ↦ N` fixed point.
pub const MAX_FIXED_POINT_ITERATIONS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizingStatus {
    /// `recommended_n` reaches the target.
    Met,
    /// The register helps, but no size reaches the target before r̃ hits 1/2
    /// or the iteration cap; `recommended_n` is the last iterate.
    Unreachable,
    /// No register size beats a single measurement; `recommended_n` is 1.
    NoImprovement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitRecommendation {
    pub id: String,
    pub worst_case_rate: f64,
    /// Median γ of the qubit's CNOT pairs (0 if it has none).
    pub gamma: f64,
    pub recommended_n: u32,
    pub predicted_eps: f64,
    pub regime: RegimeLabel,
    pub status: SizingStatus,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub eps: f64,
    pub topology: FanOut,
    pub qubits: Vec<QubitRecommendation>,
}

impl Recommendation {
    pub fn human_readable(&self) -> String {
        let mut s = format!("target eps = {:e}, fan-out {}\n", self.eps, self.topology);
        s.push_str(&format!(
            "{:<10} {:>12} {:>10} {:>6} {:>14}  {:<14} regime\n",
            "qubit", "worst_rate", "gamma", "N", "predicted_eps", "status"
        ));
        for q in &self.qubits {
            let status = serde_json::to_value(q.status).expect("unit variant");
            s.push_str(&format!(
                "{:<10} {:>12.4e} {:>10.4e} {:>6} {:>14.4e}  {:<14} {}\n",
                q.id,
                q.worst_case_rate,
                q.gamma,
                q.recommended_n,
                q.predicted_eps,
                status.as_str().unwrap_or_default(),
                q.regime
            ));
        }
        s
    }
}

fn predicted(topology: FanOut, rate: f64, gamma: f64, n: u32) -> Result<f64> {
    misid_prob(n, effective_error_for(topology, rate, gamma, n)?.get())
}

/// Size one qubit of worst-case vote error `rate` under CNOT error `gamma`.
///
/// Starts from the noiseless requirement and iterates
/// `N ← required_n_exact(eps, r̃(N))`. Since r̃ grows with N the iterates
/// never decrease, so the first repeat is the smallest self-consistent size.
pub fn size_qubit(
    id: &str,
    rate: f64,
    gamma: f64,
    eps: f64,
    topology: FanOut,
) -> Result<QubitRecommendation> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain {
            name: "eps",
            value: eps,
            allowed: "(0, 1)",
        });
    }
    let done = |n: u32, status, regime, iterations| {
        Ok(QubitRecommendation {
            id: id.to_owned(),
            worst_case_rate: rate,
            gamma,
            recommended_n: n,
            predicted_eps: predicted(topology, rate, gamma, n)?,
            regime,
            status,
            iterations,
        })
    };

    if rate == 0.0 {
        // a perfect measurement cannot be improved and needs no register
        return done(1, SizingStatus::Met, RegimeLabel::NoImprovement, 0);
    }
    if rate >= 0.5 {
        return done(1, SizingStatus::NoImprovement, RegimeLabel::NoImprovement, 0);
    }
    let regime = classify_regime(rate, gamma)?;
    if rate <= eps {
        return done(1, SizingStatus::Met, regime, 0);
    }
    if regime == RegimeLabel::NoImprovement {
        return done(1, SizingStatus::NoImprovement, regime, 0);
    }

    let mut n = required_n_exact(eps, rate)?;
    for iteration in 1..=MAX_FIXED_POINT_ITERATIONS {
        let r_tilde = effective_error_for(topology, rate, gamma, n)?.get();
        if r_tilde >= 0.5 {
            return done(n, SizingStatus::Unreachable, regime, iteration);
        }
        let next = match required_n_exact(eps, r_tilde) {
            Ok(next) => next,
            Err(Error::CapExceeded { .. }) => return done(n, SizingStatus::Unreachable, regime, iteration),
            Err(e) => return Err(e),
        };
        if next <= n {
            return done(n, SizingStatus::Met, regime, iteration);
        }
        n = next;
    }
    done(n, SizingStatus::Unreachable, regime, MAX_FIXED_POINT_ITERATIONS)
}

/// Recommendation for every qubit of a calibration file. The vote error is
/// `r + p - 2rp`; γ is the median over the qubit's CNOT pairs.
pub fn recommend(calibration: &CalibrationFile, eps: f64, topology: FanOut) -> Result<Recommendation> {
    calibration.validate()?;
    let qubits = calibration
        .qubits
        .iter()
        .map(|q| {
            let rate = combined_error(q.projection_error, q.readout_error);
            let gamma = calibration.median_gamma(&q.id).unwrap_or(0.0);
            size_qubit(&q.id, rate, gamma, eps, topology)
        })
        .collect::<Result<_>>()?;
    Ok(Recommendation {
        eps,
        topology,
        qubits,
    })
}
