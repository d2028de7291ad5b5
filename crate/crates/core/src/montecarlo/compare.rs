use serde::{Deserialize, Serialize};

use super::combined_error;
use super::table::{Params, SweepTable};
use crate::analytics::{effective_error_for, misid_prob, misid_prob_est, FanOut};
use crate::error::{Error, Result};

/// Largest `|z|` that still passes.
pub const PASS_Z: f64 = 3.0;

/// Theoretical curve a table is checked against. Every predictor uses the
/// per-vote error `q = p + r - 2pr` from the row's `p` and `r` (a missing
/// one counts as 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predictor {
    /// `misid_prob(N, q)`, CNOT noise ignored.
    Binomial,
    /// `misid_prob(N, r̃)` with the row's fan-out and γ.
    Effective,
    /// The continuous upper bound `misid_prob_est(N, r̃)`.
    Estimate,
}

impl std::str::FromStr for Predictor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binomial" | "eq2" => Ok(Self::Binomial),
            "effective" | "eq9" => Ok(Self::Effective),
            "estimate" | "eq10" => Ok(Self::Estimate),
            other => Err(Error::Config(format!(
                "unknown predictor `{other}` (expected binomial, effective or estimate)"
            ))),
        }
    }
}

fn number(params: &Params, key: &str) -> Result<Option<f64>> {
    match params.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or_else(|| Error::Config(format!("parameter `{key}` is not numeric"))),
    }
}

fn required(params: &Params, key: &str) -> Result<f64> {
    number(params, key)?.ok_or_else(|| Error::MissingParam(key.to_owned()))
}

impl Predictor {
    pub fn predict(self, params: &Params) -> Result<f64> {
        let n = required(params, "n_votes")?;
        if n < 1.0 || n.fract() != 0.0 {
            return Err(Error::Config(format!("n_votes = {n} is not a positive integer")));
        }
        let n = n as u32;
        let (p, r) = (number(params, "p")?, number(params, "r")?);
        if p.is_none() && r.is_none() {
            return Err(Error::MissingParam("p or r".into()));
        }
        let q = combined_error(p.unwrap_or(0.0), r.unwrap_or(0.0));
        if self == Self::Binomial {
            return misid_prob(n, q);
        }
        let gamma = required(params, "gamma")?;
        let topology: FanOut = params
            .get("topology")
            .ok_or_else(|| Error::MissingParam("topology".into()))?
            .as_str()
            .ok_or_else(|| Error::Config("parameter `topology` is not text".into()))?
            .parse()?;
        let r_tilde = effective_error_for(topology, q, gamma, n)?.get();
        match self {
            Self::Effective => misid_prob(n, r_tilde),
            _ => misid_prob_est(n as f64, r_tilde),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub params: Params,
    pub observed: f64,
    pub predicted: f64,
    /// The standard error the z-score divides by.
    pub se: f64,
    /// `None` when both the table's SEM and the binomial fallback are 0 but
    /// observation and prediction differ.
    pub z: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub predictor: String,
    pub rows: Vec<ComparisonRow>,
    pub passed: usize,
    pub total: usize,
    pub pass_rate: f64,
}

impl ComparisonReport {
    pub fn summary(&self) -> String {
        format!(
            "{}: {}/{} rows within {PASS_Z} standard errors ({:.1}%)",
            self.predictor,
            self.passed,
            self.total,
            100.0 * self.pass_rate
        )
    }
}

pub fn compare_to_prediction(table: &SweepTable, predictor: Predictor) -> Result<ComparisonReport> {
    let name = serde_json::to_value(predictor).expect("unit variant");
    compare_with(table, name.as_str().unwrap_or_default(), |p| predictor.predict(p))
}

/// Compare against an arbitrary prediction function.
///
/// A row with zero SEM (every repetition saw the same rate, e.g. all zeros)
/// falls back to the binomial standard error at the prediction,
/// `sqrt(pred (1 - pred) / n)`.
pub fn compare_with(
    table: &SweepTable,
    name: &str,
    predict: impl Fn(&Params) -> Result<f64>,
) -> Result<ComparisonReport> {
    let rows = table
        .rows
        .iter()
        .map(|row| {
            let predicted = predict(&row.params)?;
            let se = if row.sem > 0.0 {
                row.sem
            } else if row.n > 0 {
                (predicted * (1.0 - predicted) / row.n as f64).sqrt()
            } else {
                0.0
            };
            let diff = row.value - predicted;
            let z = if se > 0.0 {
                Some(diff / se)
            } else if diff == 0.0 {
                Some(0.0)
            } else {
                None
            };
            Ok(ComparisonRow {
                params: row.params.clone(),
                observed: row.value,
                predicted,
                se,
                z,
                pass: z.is_some_and(|z| z.abs() <= PASS_Z),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().filter(|r| r.pass).count();
    let total = rows.len();
    Ok(ComparisonReport {
        predictor: name.to_owned(),
        rows,
        passed,
        total,
        pass_rate: if total == 0 { 1.0 } else { passed as f64 / total as f64 },
    })
}
