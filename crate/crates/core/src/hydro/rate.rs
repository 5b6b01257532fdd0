use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Macroscopic rate at the defect, with its derived constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MacroRate {
    lambda0: f64,
    b: f64,
    rho_star: f64,
}

impl MacroRate {
    pub fn new(lambda0: f64) -> Result<Self> {
        if !(lambda0 > 0.0 && lambda0 <= 1.0) {
            return Err(Error::param("lambda0", format!("must lie in (0, 1], got {lambda0}")));
        }
        let b = (1.0 - lambda0).sqrt();
        Ok(MacroRate {
            lambda0,
            b,
            rho_star: 0.5 - 0.5 * b,
        })
    }

    /// Homogeneous medium, `λ ≡ 1`.
    pub fn homogeneous() -> Self {
        MacroRate::new(1.0).expect("1 is admissible")
    }

    /// `λ(0) = 4/κ` from a defect constant.
    pub fn from_kappa(kappa: f64) -> Result<Self> {
        MacroRate::new(crate::lpp::lambda0_from_kappa(kappa)?)
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    /// `B = √(1 − λ(0))`.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Critical density `ρ* = 1/2 − B/2`, the smaller root of `f₀(ρ) = λ(0)/4`.
    pub fn rho_star(&self) -> f64 {
        self.rho_star
    }

    /// `κ = 4/λ(0)`, the slope of `Γ` along the defect column.
    pub fn kappa(&self) -> f64 {
        4.0 / self.lambda0
    }

    /// True when the defect is macroscopically invisible.
    pub fn is_homogeneous(&self) -> bool {
        self.b == 0.0
    }

    /// Whether `rho` lies strictly inside the disturbed band `(ρ*, 1−ρ*)`.
    pub fn disturbs(&self, rho: f64) -> bool {
        rho > self.rho_star && rho < 1.0 - self.rho_star
    }
}
