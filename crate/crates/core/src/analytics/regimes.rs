//! Where CNOT noise stops the register from helping.
//!
//! All quantities use the log-depth effective error, `ε_N(r, γ) =
//! misid_prob(N, r + (1 - 2r) log2(N) γ)`, over odd `N` only.

use super::voting::{effective_error, misid_prob};
use super::RegimeLabel;
use crate::error::{check_probability, Error, Result};

/// Largest vote count searched by [`critical_gamma_any`] and
/// [`classify_regime`].
pub const DEFAULT_ANY_N_MAX: u32 = 1001;
/// Largest vote count used for [`best_n`] and [`first_improving_n`] grids.
pub const DEFAULT_GRID_N_MAX: u32 = 101;

const GAMMA_LO: f64 = 1e-9;
const GAMMA_HI: f64 = 0.5 - 1e-9;
const SCAN_POINTS: usize = 64;
const GAMMA_TOL: f64 = 1e-10;

fn check_design_rate(r: f64) -> Result<()> {
    if r > 0.0 && r < 0.5 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "r",
            value: r,
            allowed: "(0, 0.5)",
        })
    }
}

fn check_odd_max(n_max: u32) -> Result<()> {
    if n_max == 0 || n_max.is_multiple_of(2) {
        return Err(Error::EvenVoteCount(n_max as usize));
    }
    Ok(())
}

/// `ε_N` with the CNOT-accumulated effective error.
pub fn eps_with_cnot(n: u32, r: f64, gamma: f64) -> Result<f64> {
    let r_tilde = effective_error(r, gamma, n)?;
    misid_prob(n, r_tilde.get())
}

/// Whether some odd `3 <= N <= n_max` beats the bare single vote.
pub fn improvement_exists(r: f64, gamma: f64, n_max: u32) -> Result<bool> {
    Ok(first_improving_n(r, gamma, n_max)?.is_some())
}

/// Smallest odd `N` in `(1, n_max]` with `ε_N < ε_1`, if any.
pub fn first_improving_n(r: f64, gamma: f64, n_max: u32) -> Result<Option<u32>> {
    check_probability("r", r)?;
    check_probability("gamma", gamma)?;
    let baseline = r;
    let mut n = 3;
    while n <= n_max {
        let r_tilde = effective_error(r, gamma, n)?.get();
        // r̃ grows with N, and an odd majority at r̃ >= 1/2 is no better than a coin
        if r_tilde >= 0.5 {
            break;
        }
        if misid_prob(n, r_tilde)? < baseline {
            return Ok(Some(n));
        }
        n += 2;
    }
    Ok(None)
}

/// Odd `N` in `[1, n_max]` minimizing `ε_N`; ties go to the smaller `N`.
pub fn best_n(r: f64, gamma: f64, n_max: u32) -> Result<u32> {
    check_design_rate(r)?;
    check_odd_max(n_max)?;
    let mut best = (1, eps_with_cnot(1, r, gamma)?);
    let mut n = 3;
    while n <= n_max {
        let eps = eps_with_cnot(n, r, gamma)?;
        if eps < best.1 {
            best = (n, eps);
        }
        n += 2;
    }
    Ok(best.0)
}

/// Bisect a predicate that holds at the low end of `[GAMMA_LO, GAMMA_HI]`
/// and fails at the high end. A coarse scan locates the first flip first.
fn boundary<F>(what: &'static str, holds: F) -> Result<f64>
where
    F: Fn(f64) -> Result<bool>,
{
    let step = (GAMMA_HI - GAMMA_LO) / (SCAN_POINTS - 1) as f64;
    let mut prev = GAMMA_LO;
    if !holds(prev)? {
        return Err(Error::NoRoot { what });
    }
    let mut bracket = None;
    for i in 1..SCAN_POINTS {
        let g = if i == SCAN_POINTS - 1 {
            GAMMA_HI
        } else {
            GAMMA_LO + i as f64 * step
        };
        if !holds(g)? {
            bracket = Some((prev, g));
            break;
        }
        prev = g;
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::NoRoot { what })?;
    while hi - lo > GAMMA_TOL {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// γ at which three votes stop beating one: `ε_3(r, γ) = ε_1(r)`.
pub fn critical_gamma_initial(r: f64) -> Result<f64> {
    check_design_rate(r)?;
    boundary("ε_3 - ε_1", |g| Ok(eps_with_cnot(3, r, g)? < r))
}

/// γ above which no odd `N <= n_max` improves on a single vote.
pub fn critical_gamma_any(r: f64, n_max: u32) -> Result<f64> {
    check_design_rate(r)?;
    check_odd_max(n_max)?;
    boundary("improvement predicate", |g| improvement_exists(r, g, n_max))
}

/// Regime of `(r, γ)` by direct evaluation of the two predicates, searching
/// odd `N <= DEFAULT_ANY_N_MAX`.
pub fn classify_regime(r: f64, gamma: f64) -> Result<RegimeLabel> {
    check_design_rate(r)?;
    if eps_with_cnot(3, r, gamma)? < r {
        Ok(RegimeLabel::ImmediateImprovement)
    } else if improvement_exists(r, gamma, DEFAULT_ANY_N_MAX)? {
        Ok(RegimeLabel::InitialWorseningThenImprovement)
    } else {
        Ok(RegimeLabel::NoImprovement)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_boundary_brackets_the_root() {
        let r = 0.05;
        let g = critical_gamma_initial(r).unwrap();
        assert!(g > 0.0);
        assert!(eps_with_cnot(3, r, g * (1.0 - 1e-3)).unwrap() < r);
        assert!(eps_with_cnot(3, r, g * (1.0 + 1e-3)).unwrap() > r);
    }

    #[test]
    fn zero_gamma_always_improves() {
        for &r in &[0.001, 0.05, 0.2, 0.45] {
            assert!(eps_with_cnot(3, r, 0.0).unwrap() < r);
            assert!(improvement_exists(r, 0.0, DEFAULT_ANY_N_MAX).unwrap());
        }
    }

    #[test]
    fn half_gamma_never_improves() {
        for &r in &[0.001, 0.05, 0.2, 0.45] {
            let mut n = 3;
            while n <= DEFAULT_ANY_N_MAX {
                assert!(eps_with_cnot(n, r, 0.5).unwrap() >= r, "r={r} N={n}");
                n += 2;
            }
            assert!(!improvement_exists(r, 0.5, DEFAULT_ANY_N_MAX).unwrap());
        }
    }

    #[test]
    fn boundaries_are_ordered() {
        for &r in &[0.01, 0.05, 0.1] {
            let a = critical_gamma_initial(r).unwrap();
            let b = critical_gamma_any(r, DEFAULT_ANY_N_MAX).unwrap();
            assert!(a <= b, "r={r}: {a} > {b}");
            assert!(b < 0.5);
        }
    }

    #[test]
    fn best_n_examples() {
        assert_eq!(best_n(0.1, 0.0, 101).unwrap(), 101);
        assert_eq!(best_n(0.1, 0.4, 101).unwrap(), 1);
        let mid = best_n(0.05, 0.06, 101).unwrap();
        assert!(mid > 1 && mid < 101, "{mid}");
        assert!(best_n(0.1, 0.0, 100).is_err());
    }

    #[test]
    fn first_improving_examples() {
        assert_eq!(first_improving_n(0.1, 0.0, 101).unwrap(), Some(3));
        assert_eq!(first_improving_n(0.1, 0.45, 101).unwrap(), None);
    }

    #[test]
    fn best_is_at_least_as_good_as_first() {
        for &r in &[0.02, 0.08, 0.15] {
            for &g in &[0.0, 0.03, 0.06, 0.08, 0.1] {
                if let Some(first) = first_improving_n(r, g, 101).unwrap() {
                    let best = best_n(r, g, 101).unwrap();
                    assert!(
                        eps_with_cnot(best, r, g).unwrap() <= eps_with_cnot(first, r, g).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn classification_agrees_with_boundaries() {
        for &r in &[0.01, 0.05, 0.1, 0.2] {
            let a = critical_gamma_initial(r).unwrap();
            let b = critical_gamma_any(r, DEFAULT_ANY_N_MAX).unwrap();
            let mut g = 0.0;
            while g < 0.5 {
                let label = classify_regime(r, g).unwrap();
                let margin = 1e-6;
                if g < a - margin {
                    assert_eq!(label, RegimeLabel::ImmediateImprovement, "r={r} g={g}");
                } else if g > a + margin && g < b - margin {
                    assert_eq!(label, RegimeLabel::InitialWorseningThenImprovement, "r={r} g={g}");
                    let first = first_improving_n(r, g, DEFAULT_ANY_N_MAX).unwrap();
                    assert!(matches!(first, Some(n) if n > 3));
                } else if g > b + margin {
                    assert_eq!(label, RegimeLabel::NoImprovement, "r={r} g={g}");
                    assert_eq!(first_improving_n(r, g, DEFAULT_ANY_N_MAX).unwrap(), None);
                }
                g += 0.0025;
            }
        }
    }

    #[test]
    fn domain() {
        assert!(critical_gamma_initial(0.5).is_err());
        assert!(critical_gamma_initial(0.0).is_err());
        assert!(critical_gamma_any(0.1, 100).is_err());
    }
}
