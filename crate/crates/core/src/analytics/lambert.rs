//! Principal branch of the Lambert W function on the real line.

use std::f64::consts::E;

use crate::error::{Error, Result};

const MAX_HALLEY_ITER: usize = 32;

/// `W₀(z)`: the solution `w ≥ -1` of `w·e^w = z`, for `z ≥ -1/e`.
pub fn lambert_w0(z: f64) -> Result<f64> {
    let branch_point = -1.0 / E;
    // allow a few ulps below -1/e so that `-1.0 / E` itself is accepted
    if z.is_nan() || z < branch_point - 4.0 * f64::EPSILON || z.is_infinite() {
        return Err(Error::Domain {
            name: "z",
            value: z,
            allowed: "[-1/e, inf)",
        });
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let offset = z - branch_point;
    if offset <= 4.0 * f64::EPSILON {
        return Ok(-1.0);
    }

    let mut w = initial_guess(z, offset);
    for _ in 0..MAX_HALLEY_ITER {
        let ew = w.exp();
        let f = w * ew - z;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        let next = (w - step).max(-1.0);
        if (next - w).abs() <= 4.0 * f64::EPSILON * (1.0 + next.abs()) {
            return Ok(next);
        }
        w = next;
    }
    // the loop above stalls only when the residual is already at rounding level
    let residual = (w * w.exp() - z).abs();
    if residual <= 1e-12 * z.abs().max(1.0) {
        Ok(w)
    } else {
        Err(Error::NoConvergence {
            what: "Lambert W Halley iteration",
            iterations: MAX_HALLEY_ITER,
        })
    }
}

fn initial_guess(z: f64, offset: f64) -> f64 {
    if z < -0.25 {
        // series about the branch point
        let p = (2.0 * E * offset).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if z <= E {
        z.ln_1p() * (1.0 - z.ln_1p() / (2.0 + z.ln_1p()))
    } else {
        let l1 = z.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    }
}
