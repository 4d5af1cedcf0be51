//! Gaussian-Coulomb integrals.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `∫ exp(-alpha r²) / r d³r = 2π / alpha`.
pub fn gaussian_coulomb(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid(format!("Gaussian exponent must be positive, got {alpha}")));
    }
    Ok(2.0 * PI / alpha)
}

/// Zeroth Boys function `F0(t) = ∫_0^1 exp(-t u²) du = ½ sqrt(π/t) erf(sqrt t)`.
pub fn boys_f0(t: f64) -> f64 {
    if t < 1e-6 {
        // Taylor series; the truncation error is below t³/42 < 1e-19
        1.0 - t / 3.0 + t * t / 10.0
    } else {
        let x = t.sqrt();
        0.5 * (PI / t).sqrt() * libm::erf(x)
    }
}

/// `∫ exp(-alpha |r - C|²) / r d³r` for a Gaussian centred a distance
/// `distance` away from the Coulomb singularity.
pub fn gaussian_point_coulomb(alpha: f64, distance: f64) -> Result<f64> {
    Ok(gaussian_coulomb(alpha)? * boys_f0(alpha * distance * distance))
}
