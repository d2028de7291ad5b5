use std::f64::consts::PI;

use super::beta::{ln_choose, reg_inc_beta};
use super::lambert::lambert_w0;
use super::{EffectiveError, FanOut};
use crate::error::{check_probability, Error, Result};

/// Default upper bound on the odd-N scan in [`required_n_exact`].
pub const DEFAULT_N_CAP: u32 = 10_001;

fn check_votes(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain {
            name: "N",
            value: 0.0,
            allowed: "N >= 1",
        });
    }
    Ok(())
}

fn check_odd_votes(n: u32) -> Result<()> {
    check_votes(n)?;
    if n.is_multiple_of(2) {
        return Err(Error::EvenVoteCount(n as usize));
    }
    Ok(())
}

/// Probability that a majority over `n` votes, each wrong with probability
/// `r`, names the wrong state: `I_r(N - ⌊N/2⌋, 1 + ⌊N/2⌋)`.
///
/// For even `n` a tie counts as a misidentification.
pub fn misid_prob(n: u32, r: f64) -> Result<f64> {
    check_votes(n)?;
    check_probability("r", r)?;
    let half = n / 2;
    reg_inc_beta(r, (n - half) as f64, (1 + half) as f64)
}

/// Leading polynomial term `C(N, ⌊N/2⌋) r^(N-⌊N/2⌋)`. Good to about an
/// order of magnitude for small `r`.
pub fn misid_prob_poly(n: u32, r: f64) -> Result<f64> {
    check_odd_votes(n)?;
    check_probability("r", r)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    let half = n / 2;
    Ok((ln_choose(n, half) + (n - half) as f64 * r.ln()).exp())
}

/// Stirling form of the polynomial term, `(4r)^((N+1)/2) / sqrt(2π(N+1))`.
pub fn misid_prob_stirling(n: u32, r: f64) -> Result<f64> {
    check_odd_votes(n)?;
    check_probability("r", r)?;
    let np1 = n as f64 + 1.0;
    Ok((4.0 * r).powf(np1 / 2.0) / (2.0 * PI * np1).sqrt())
}

/// `ε_est = I_r̃(N/2, 1 + N/2)`, an upper bound on [`misid_prob`] that
/// accepts non-integer `n`.
pub fn misid_prob_est(n: f64, r_tilde: f64) -> Result<f64> {
    if n.is_nan() || n < 1.0 || !n.is_finite() {
        return Err(Error::Domain {
            name: "N",
            value: n,
            allowed: "N >= 1",
        });
    }
    check_probability("r_tilde", r_tilde)?;
    reg_inc_beta(r_tilde, n / 2.0, 1.0 + n / 2.0)
}

/// Log-depth effective error `r + (1 - 2r) log2(N) γ`, clamped to [0, 1].
pub fn effective_error(r: f64, gamma: f64, n: u32) -> Result<EffectiveError> {
    check_votes(n)?;
    check_probability("r", r)?;
    check_probability("gamma", gamma)?;
    if n == 1 {
        return Ok(EffectiveError::from_clamped(r));
    }
    Ok(EffectiveError::from_clamped(
        r + (1.0 - 2.0 * r) * (n as f64).log2() * gamma,
    ))
}

/// Linear fan-out effective error `r + γ - 2rγ` (one CNOT per vote).
pub fn effective_error_linear(r: f64, gamma: f64) -> Result<EffectiveError> {
    check_probability("r", r)?;
    check_probability("gamma", gamma)?;
    Ok(EffectiveError::from_clamped(r + gamma - 2.0 * r * gamma))
}

/// Effective error for the chosen fan-out. `N = 1` has no CNOTs at all.
pub fn effective_error_for(fan_out: FanOut, r: f64, gamma: f64, n: u32) -> Result<EffectiveError> {
    match fan_out {
        FanOut::LogDepth => effective_error(r, gamma, n),
        FanOut::Linear if n == 1 => {
            check_probability("r", r)?;
            Ok(EffectiveError::from_clamped(r))
        }
        FanOut::Linear => effective_error_linear(r, gamma),
    }
}

fn round_up_to_odd(x: f64) -> u32 {
    let c = x.ceil();
    if c < 1.0 {
        return 1;
    }
    let c = c as u32;
    if c % 2 == 1 {
        c
    } else {
        c + 1
    }
}

/// Vote count from the Lambert-W inversion of the Stirling approximation,
/// rounded to the next odd integer (never below 1).
pub fn required_n_approx(eps: f64, r: f64) -> Result<u32> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain {
            name: "eps",
            value: eps,
            allowed: "(0, 1)",
        });
    }
    if !(0.0..=0.25).contains(&r) {
        return Err(Error::Domain {
            name: "r",
            value: r,
            allowed: "[0, 0.25]",
        });
    }
    if r == 0.0 {
        return Ok(1);
    }
    let ln_r = (4.0 * r).ln();
    let scale = 2.0 * PI * eps * eps;
    let continuous = if ln_r == 0.0 {
        // limit of -W(z)/ln R as ln R -> 0, with W(z) ~ z
        1.0 / scale - 1.0
    } else {
        -lambert_w0(-ln_r / scale)? / ln_r - 1.0
    };
    Ok(round_up_to_odd(continuous))
}

/// Smallest odd `N` with `misid_prob(N, r) <= eps`, scanning up to
/// [`DEFAULT_N_CAP`].
pub fn required_n_exact(eps: f64, r: f64) -> Result<u32> {
    required_n_exact_capped(eps, r, DEFAULT_N_CAP)
}

pub fn required_n_exact_capped(eps: f64, r: f64, cap: u32) -> Result<u32> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain {
            name: "eps",
            value: eps,
            allowed: "(0, 1)",
        });
    }
    if !(0.0..0.5).contains(&r) {
        return Err(Error::Domain {
            name: "r",
            value: r,
            allowed: "[0, 0.5)",
        });
    }
    let mut n = 1;
    while n <= cap {
        if misid_prob(n, r)? <= eps {
            return Ok(n);
        }
        n += 2;
    }
    Err(Error::CapExceeded { cap })
}
