//! Figure-ready tables computed directly from [`crate::analytics`].

use serde::{Deserialize, Serialize};

use super::table::{Params, SweepRow, SweepTable, TableMetadata};
use crate::analytics::{
    best_n, classify_regime, critical_gamma_any, critical_gamma_initial, effective_error,
    first_improving_n, misid_prob, misid_prob_est, required_n_approx, required_n_exact, RegimeLabel,
};
use crate::error::{Error, Result};

fn params<const K: usize>(pairs: [(&str, super::table::ParamValue); K]) -> Params {
    pairs.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

fn table(kind: &str, request: &impl Serialize, rows: Vec<SweepRow>) -> SweepTable {
    SweepTable {
        metadata: TableMetadata::analytic(kind, request),
        rows,
    }
}

/// `misid_prob(N, r)` for every pair.
pub fn misid_table(rs: &[f64], ns: &[u32]) -> Result<SweepTable> {
    let mut rows = Vec::new();
    for &r in rs {
        for &n in ns {
            rows.push(SweepRow::exact(
                params([("r", r.into()), ("n_votes", n.into())]),
                misid_prob(n, r)?,
            ));
        }
    }
    Ok(table("misid", &(rs, ns), rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizingMethod {
    Approx,
    Exact,
    Both,
}

impl std::str::FromStr for SizingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "approx" => Ok(Self::Approx),
            "exact" => Ok(Self::Exact),
            "both" => Ok(Self::Both),
            other => Err(Error::Config(format!(
                "unknown method `{other}` (expected approx, exact or both)"
            ))),
        }
    }
}

/// Required vote count per `(eps, r)`; with `Both` each point gives an
/// `approx` and an `exact` row.
pub fn required_n_table(eps: &[f64], rs: &[f64], method: SizingMethod) -> Result<SweepTable> {
    let mut rows = Vec::new();
    for &e in eps {
        for &r in rs {
            let mut push = |name: &str, n: u32| {
                rows.push(SweepRow::exact(
                    params([("eps", e.into()), ("r", r.into()), ("method", name.into())]),
                    n as f64,
                ))
            };
            if method != SizingMethod::Exact {
                push("approx", required_n_approx(e, r)?);
            }
            if method != SizingMethod::Approx {
                push("exact", required_n_exact(e, r)?);
            }
        }
    }
    Ok(table("required_n", &(eps, rs, method), rows))
}

/// `ε_est(N, r̃)` against the log-depth effective error for continuous `N`.
/// Points with `r̃ >= 1/2` are reported as 1, where the protocol has failed.
pub fn eps_est_table(r: f64, gammas: &[f64], ns: &[f64]) -> Result<SweepTable> {
    let mut rows = Vec::new();
    for &gamma in gammas {
        for &n in ns {
            if n.is_nan() || n < 1.0 {
                return Err(Error::Domain {
                    name: "N",
                    value: n,
                    allowed: "N >= 1",
                });
            }
            // continuous-N form of the log-depth effective error
            let r_tilde = (r + (1.0 - 2.0 * r) * n.log2() * gamma).clamp(0.0, 1.0);
            let value = if r_tilde >= 0.5 { 1.0 } else { misid_prob_est(n, r_tilde)? };
            rows.push(SweepRow::exact(
                params([
                    ("r", r.into()),
                    ("gamma", gamma.into()),
                    ("n_votes", n.into()),
                    ("r_tilde", r_tilde.into()),
                ]),
                value,
            ));
        }
    }
    Ok(table("eps_est", &(r, gammas, ns), rows))
}

/// Regimes I, II, III map to values 1, 2, 3, with the label in `regime`.
/// Also carries `ε_3 - ε_1`.
pub fn regimes_table(rs: &[f64], gammas: &[f64]) -> Result<SweepTable> {
    let mut rows = Vec::new();
    for &r in rs {
        let eps1 = misid_prob(1, r)?;
        for &gamma in gammas {
            let label = classify_regime(r, gamma)?;
            let code = match label {
                RegimeLabel::NoImprovement => 1.0,
                RegimeLabel::InitialWorseningThenImprovement => 2.0,
                RegimeLabel::ImmediateImprovement => 3.0,
            };
            let eps3 = misid_prob(3, effective_error(r, gamma, 3)?.get())?;
            rows.push(SweepRow::exact(
                params([
                    ("r", r.into()),
                    ("gamma", gamma.into()),
                    ("regime", label.as_str().into()),
                    ("delta_eps_3_1", (eps3 - eps1).into()),
                ]),
                code,
            ));
        }
    }
    Ok(table("regimes", &(rs, gammas), rows))
}

/// Both regime boundaries for each `r`.
pub fn critical_gamma_table(rs: &[f64], n_max: u32) -> Result<SweepTable> {
    let mut rows = Vec::new();
    for &r in rs {
        rows.push(SweepRow::exact(
            params([("r", r.into()), ("boundary", "initial".into())]),
            critical_gamma_initial(r)?,
        ));
        rows.push(SweepRow::exact(
            params([("r", r.into()), ("boundary", "any".into()), ("n_max", n_max.into())]),
            critical_gamma_any(r, n_max)?,
        ));
    }
    Ok(table("critical_gamma", &(rs, n_max), rows))
}

/// Best odd `N <= n_max` per `(r, γ)`.
pub fn best_n_table(rs: &[f64], gammas: &[f64], n_max: u32) -> Result<SweepTable> {
    let mut rows = Vec::new();
    for &r in rs {
        for &gamma in gammas {
            rows.push(SweepRow::exact(
                params([("r", r.into()), ("gamma", gamma.into()), ("n_max", n_max.into())]),
                best_n(r, gamma, n_max)? as f64,
            ));
        }
    }
    Ok(table("best_n", &(rs, gammas, n_max), rows))
}

/// First improving odd `N <= n_max` per `(r, γ)`; 0 when none exists.
pub fn first_n_table(rs: &[f64], gammas: &[f64], n_max: u32) -> Result<SweepTable> {
    let mut rows = Vec::new();
    for &r in rs {
        for &gamma in gammas {
            let first = first_improving_n(r, gamma, n_max)?.unwrap_or(0);
            rows.push(SweepRow::exact(
                params([("r", r.into()), ("gamma", gamma.into()), ("n_max", n_max.into())]),
                first as f64,
            ));
        }
    }
    Ok(table("first_n", &(rs, gammas, n_max), rows))
}
