//! Modified Bessel function of the first kind, order zero.
//!
//! Power series `Σ (z²/4)^k / (k!)²` up to [`SERIES_LIMIT`], Hankel-type
//! asymptotic expansion `e^z / √(2πz) · Σ a_k (8z)^{-k}` beyond it. All
//! series terms are positive on `z ≥ 0`, so neither branch suffers from
//! cancellation.

use crate::error::BoundaryError;

/// Switch point between the power series and the asymptotic expansion.
pub const SERIES_LIMIT: f64 = 15.0;

const MAX_TERMS: usize = 500;

/// `I₀(z)` for `z ≥ 0`.
pub fn bessel_i0(z: f64) -> Result<f64, BoundaryError> {
    if z.is_nan() || z < 0.0 {
        return Err(BoundaryError::NegativeArgument(z));
    }
    if z <= SERIES_LIMIT {
        Ok(i0_series(z))
    } else {
        Ok(i0_asymptotic_scaled(z) * z.exp())
    }
}

/// `e^{-z} I₀(z)` for `z ≥ 0`. Finite for every finite argument.
pub fn bessel_i0_scaled(z: f64) -> Result<f64, BoundaryError> {
    if z.is_nan() || z < 0.0 {
        return Err(BoundaryError::NegativeArgument(z));
    }
    if z <= SERIES_LIMIT {
        Ok(i0_series(z) * (-z).exp())
    } else {
        Ok(i0_asymptotic_scaled(z))
    }
}

/// Power-series branch, summed until the next term no longer changes the sum.
pub fn i0_series(z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * kf);
        let next = sum + term;
        if next == sum {
            break;
        }
        sum = next;
    }
    sum
}

/// Asymptotic branch evaluated without the exponential factor. Accurate to
/// roughly `e^{-2z}` relative, so only meaningful for large `z`.
pub fn i0_asymptotic_scaled(z: f64) -> f64 {
    let inv8z = 1.0 / (8.0 * z);
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 1..MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        let next_term = term * odd * odd * inv8z / k as f64;
        // Divergent series: stop at the smallest term.
        if next_term >= term || sum + next_term == sum {
            break;
        }
        term = next_term;
        sum += term;
    }
    sum / (2.0 * std::f64::consts::PI * z).sqrt()
}
