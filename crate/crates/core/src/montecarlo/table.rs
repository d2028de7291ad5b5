use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::qsim::RNG_ALGORITHM;

/// One parameter value in a table row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Text(String),
}

impl ParamValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Self::Int(i) => Some(*i as f64),
            Self::Float(x) => Some(*x),
            Self::Text(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Self::Text(s) => Some(s),
            _ => None,
        }
    }
}

impl From<f64> for ParamValue {
    fn from(x: f64) -> Self {
        Self::Float(x)
    }
}

impl From<u32> for ParamValue {
    fn from(i: u32) -> Self {
        Self::Int(i.into())
    }
}

impl From<usize> for ParamValue {
    fn from(i: usize) -> Self {
        Self::Int(i as i64)
    }
}

impl From<&str> for ParamValue {
    fn from(s: &str) -> Self {
        Self::Text(s.to_owned())
    }
}

impl From<String> for ParamValue {
    fn from(s: String) -> Self {
        Self::Text(s)
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Int(i) => write!(f, "{i}"),
            Self::Float(x) => f.write_str(&format_float(*x)),
            Self::Text(s) => f.write_str(s),
        }
    }
}

/// Scientific notation with 17 significant digits; parses back to the same
/// `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub type Params = BTreeMap<String, ParamValue>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub params: Params,
    pub value: f64,
    /// Standard error of the mean; 0 for analytic rows.
    pub sem: f64,
    /// Number of samples behind `value`; 0 for analytic rows.
    pub n: u64,
}

impl SweepRow {
    pub fn exact(params: Params, value: f64) -> Self {
        Self {
            params,
            value,
            sem: 0.0,
            n: 0,
        }
    }
}

/// Provenance. Contains nothing that depends on the machine, the time or the
/// worker count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMetadata {
    pub kind: String,
    /// SHA-256 of the canonical JSON of whatever produced the table.
    pub config_hash: String,
    pub seed: Option<u64>,
    pub code_version: String,
    pub rng_algorithm: String,
    pub runs: Option<u64>,
    pub repetitions: Option<u64>,
}

impl TableMetadata {
    /// Metadata for a table computed without sampling.
    pub fn analytic(kind: &str, request: &impl Serialize) -> Self {
        Self {
            kind: kind.to_owned(),
            config_hash: config_hash(request),
            seed: None,
            code_version: env!("CARGO_PKG_VERSION").to_owned(),
            rng_algorithm: RNG_ALGORITHM.to_owned(),
            runs: None,
            repetitions: None,
        }
    }
}

/// Hex SHA-256 of `serde_json::to_vec(value)`. Struct fields serialize in
/// declaration order and maps in key order, so this is stable.
pub fn config_hash(value: &impl Serialize) -> String {
    let bytes = serde_json::to_vec(value).expect("config types always serialize");
    hex::encode(Sha256::digest(&bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub metadata: TableMetadata,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tables always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("sweep table JSON: {e}")))
    }

    /// Sorted union of parameter names over all rows.
    pub fn param_names(&self) -> Vec<String> {
        let names: BTreeSet<&String> = self.rows.iter().flat_map(|r| r.params.keys()).collect();
        names.into_iter().cloned().collect()
    }

    /// CSV with `# key: value` metadata comment lines, then a header of the
    /// sorted parameter names followed by `value,sem,n`. Missing parameters
    /// are empty cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let m = &self.metadata;
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        for (k, v) in [
            ("kind", m.kind.clone()),
            ("config_hash", m.config_hash.clone()),
            ("seed", opt(m.seed)),
            ("code_version", m.code_version.clone()),
            ("rng_algorithm", m.rng_algorithm.clone()),
            ("runs", opt(m.runs)),
            ("repetitions", opt(m.repetitions)),
        ] {
            out.push_str(&format!("# {k}: {v}\n"));
        }

        let names = self.param_names();
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = names.iter().map(String::as_str).chain(["value", "sem", "n"]);
        w.write_record(header).expect("in-memory write");
        for row in &self.rows {
            let mut record: Vec<String> = names
                .iter()
                .map(|k| row.params.get(k).map(ToString::to_string).unwrap_or_default())
                .collect();
            record.push(format_float(row.value));
            record.push(format_float(row.sem));
            record.push(row.n.to_string());
            w.write_record(&record).expect("in-memory write");
        }
        let body = w.into_inner().expect("in-memory flush");
        out.push_str(std::str::from_utf8(&body).expect("csv of utf-8 fields"));
        out
    }

    /// Serialize in the requested format.
    pub fn render(&self, format: TableFormat) -> String {
        match format {
            TableFormat::Csv => self.to_csv(),
            TableFormat::Json => self.to_json(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Config(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}
