use crate::error::{Error, Result};

/// TASEP flux `ρ(1−ρ)`.
pub fn f0(rho: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Domain(format!("density {rho} outside [0, 1]")));
    }
    Ok(rho * (1.0 - rho))
}

/// Legendre conjugate `g₀(x) = sup_{0≤ρ≤1} {f₀(ρ) − xρ}`.
pub fn g0(x: f64) -> f64 {
    if x <= -1.0 {
        -x
    } else if x >= 1.0 {
        0.0
    } else {
        0.25 * (1.0 - x) * (1.0 - x)
    }
}

/// Homogeneous wedge shape `(√(x+y) + √y)²` on `V = {y ≥ 0, x ≥ −y}`.
pub fn gamma0(x: f64, y: f64) -> Result<f64> {
    if !(y >= 0.0 && x + y >= 0.0) {
        return Err(Error::Domain(format!("({x}, {y}) is outside the wedge V")));
    }
    Ok(gamma0_unchecked(x, y))
}

/// `γ₀` with round-off negatives clamped to the wedge edge.
#[inline]
pub(crate) fn gamma0_unchecked(x: f64, y: f64) -> f64 {
    let s = (x + y).max(0.0).sqrt() + y.max(0.0).sqrt();
    s * s
}
