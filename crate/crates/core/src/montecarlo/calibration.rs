//! Per-qubit error rates and per-CNOT γ from a JSON file.
//!
//! ```json
//! {
//!   "schema": "calib/1",
//!   "qubits": [{"id": "q0", "readout_error": 0.02, "projection_error": 0.05}],
//!   "cnot_pairs": [{"control_id": "q0", "target_id": "q1", "gamma": 0.005}]
//! }
//! ```
//!
//! Ids may be strings or integers. The format is this crate's own; it is not
//! a vendor format.

use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{check_probability, Error, Result};
use crate::qsim::{ErrorModel, FlipRates, QubitNoise};

pub const CALIBRATION_SCHEMA: &str = "calib/1";

fn id_from_any<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<String, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Id {
        Int(u64),
        Text(String),
    }
    Ok(match Id::deserialize(d)? {
        Id::Int(i) => i.to_string(),
        Id::Text(s) => s,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibratedQubit {
    #[serde(deserialize_with = "id_from_any")]
    pub id: String,
    pub readout_error: f64,
    #[serde(default)]
    pub projection_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CnotPair {
    #[serde(deserialize_with = "id_from_any")]
    pub control_id: String,
    #[serde(deserialize_with = "id_from_any")]
    pub target_id: String,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationFile {
    pub schema: String,
    pub qubits: Vec<CalibratedQubit>,
    #[serde(default)]
    pub cnot_pairs: Vec<CnotPair>,
}

impl CalibrationFile {
    /// Parse and validate.
    pub fn from_json(s: &str) -> Result<Self> {
        let file: Self =
            serde_json::from_str(s).map_err(|e| Error::Config(format!("calibration file: {e}")))?;
        file.validate()?;
        Ok(file)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != CALIBRATION_SCHEMA {
            return Err(Error::Config(format!(
                "calibration schema `{}` is not supported (expected {CALIBRATION_SCHEMA})",
                self.schema
            )));
        }
        let mut seen = BTreeSet::new();
        for q in &self.qubits {
            if !seen.insert(q.id.as_str()) {
                return Err(Error::Config(format!("duplicate qubit id `{}`", q.id)));
            }
            check_probability("readout_error", q.readout_error)?;
            check_probability("projection_error", q.projection_error)?;
        }
        for pair in &self.cnot_pairs {
            for id in [&pair.control_id, &pair.target_id] {
                if !seen.contains(id.as_str()) {
                    return Err(Error::Config(format!("cnot pair names unknown qubit `{id}`")));
                }
            }
            if pair.control_id == pair.target_id {
                return Err(Error::Config(format!("cnot pair on a single qubit `{}`", pair.control_id)));
            }
            check_probability("gamma", pair.gamma)?;
        }
        Ok(())
    }

    fn index_of(&self, id: &str) -> Option<usize> {
        self.qubits.iter().position(|q| q.id == id)
    }

    /// Median γ over every pair that touches `id`, or `None` if it has none.
    pub fn median_gamma(&self, id: &str) -> Option<f64> {
        let mut g: Vec<f64> = self
            .cnot_pairs
            .iter()
            .filter(|p| p.control_id == id || p.target_id == id)
            .map(|p| p.gamma)
            .collect();
        if g.is_empty() {
            return None;
        }
        g.sort_by(f64::total_cmp);
        let mid = g.len() / 2;
        Some(if g.len() % 2 == 1 { g[mid] } else { 0.5 * (g[mid - 1] + g[mid]) })
    }

    /// Error model with file qubit `i` mapped to simulator qubit `i`
    /// (T, C, V_1, …). Unlisted CNOT pairs are noiseless.
    pub fn to_error_model(&self) -> Result<ErrorModel> {
        let per_qubit = self
            .qubits
            .iter()
            .map(|q| {
                Ok(QubitNoise {
                    projection: FlipRates::symmetric(q.projection_error)?,
                    readout: FlipRates::symmetric(q.readout_error)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let per_pair = self
            .cnot_pairs
            .iter()
            .map(|p| {
                let c = self.index_of(&p.control_id).expect("validated");
                let t = self.index_of(&p.target_id).expect("validated");
                ((c, t), p.gamma)
            })
            .collect();
        Ok(ErrorModel {
            default: QubitNoise::default(),
            per_qubit,
            gamma: 0.0,
            per_pair,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"{
        "schema": "calib/1",
        "qubits": [
            {"id": 0, "readout_error": 0.02, "projection_error": 0.05},
            {"id": "q1", "readout_error": 0.01},
            {"id": 2, "readout_error": 0.03}
        ],
        "cnot_pairs": [
            {"control_id": 0, "target_id": 2, "gamma": 0.004},
            {"control_id": "q1", "target_id": 0, "gamma": 0.01},
            {"control_id": 2, "target_id": "q1", "gamma": 0.002}
        ]
    }"#;

    #[test]
    fn parses_and_maps() {
        let f = CalibrationFile::from_json(GOOD).unwrap();
        assert_eq!(f.qubits[0].id, "0");
        assert_eq!(f.qubits[1].projection_error, 0.0);
        let m = f.to_error_model().unwrap();
        assert_eq!(m.qubit(0).projection.from_one, 0.05);
        assert_eq!(m.gamma_for(0, 2), 0.004);
        assert_eq!(m.gamma_for(2, 0), 0.0);
        assert_eq!(f.median_gamma("0"), Some(0.007));
        assert_eq!(f.median_gamma("2"), Some(0.003));
    }

    #[test]
    fn rejects_bad_files() {
        let cases = [
            GOOD.replace("calib/1", "calib/2"),
            GOOD.replace("\"q1\", \"readout_error\": 0.01", "0, \"readout_error\": 0.01"),
            GOOD.replace("0.03}", "1.5}"),
            GOOD.replace("\"gamma\": 0.002", "\"gamma\": 0.002, \"extra\": 1"),
            GOOD.replace("\"target_id\": 2,", "\"target_id\": 7,"),
        ];
        for c in cases {
            assert!(CalibrationFile::from_json(&c).is_err(), "{c}");
        }
    }
}
