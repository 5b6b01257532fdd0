use log::warn;
use serde::{Deserialize, Serialize};

use super::clocks::BondClocks;
use super::exclusion::Simulation;
use super::init::{init_bernoulli, init_canonical};
use super::window::{Boundary, Window};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCorrelation {
    pub rho: f64,
    pub r: f64,
    pub window: Window,
    pub burn_in: f64,
    pub horizon: f64,
    pub seed: u64,
    pub bonds: Vec<i64>,
    /// Estimates of `P{η_i = 1, η_{i+1} = 0}`, one per bond.
    pub estimates: Vec<f64>,
    /// False when `ρ` lies strictly between `ρ*` and `1 − ρ*`.
    pub precondition_ok: bool,
}

impl PairCorrelation {
    pub fn at(&self, bond: i64) -> Option<f64> {
        let k = self.bonds.iter().position(|b| *b == bond)?;
        Some(self.estimates[k])
    }
}

/// Time-averaged `P{η_i = 1, η_{i+1} = 0}` from `E J_i(t) = rate_i ∫ P{…}`.
///
/// On a ring the particle count is conserved, so the start is canonical:
/// exactly `round(ρN)` particles placed uniformly. A closed window starts from
/// Bernoulli(ρ). Bond 0 has rate `r`. The run discards `[0, burn_in]` and
/// divides the jumps over the next `horizon` by `rate_i·horizon`.
pub fn stationary_pair_correlation(
    rho: f64,
    r: f64,
    window: Window,
    burn_in: f64,
    horizon: f64,
    seed: u64,
    rho_star: Option<f64>,
) -> Result<PairCorrelation> {
    if !(burn_in >= 0.0 && horizon > 0.0) {
        return Err(Error::param("horizon", "need burn_in >= 0 and horizon > 0"));
    }
    let clocks = BondClocks::slow_bond(r, seed)?;
    let precondition_ok = match rho_star {
        Some(s) => !(rho > s && rho < 1.0 - s),
        None => true,
    };
    if !precondition_ok {
        warn!("density {rho} lies inside the blocked range; the pair correlation estimate is flagged");
    }
    if window.boundary == Boundary::Closed {
        warn!("closed window: particles jam at the right wall and the estimate is not stationary");
    }
    let occ = match window.boundary {
        Boundary::Periodic => init_canonical(rho, window, seed)?,
        Boundary::Closed => init_bernoulli(rho, window, seed)?,
    };
    let mut sim = Simulation::new(occ, &clocks);
    sim.run_until(burn_in);
    let before = sim.process().currents().to_vec();
    sim.run_until(burn_in + horizon);
    let bonds: Vec<i64> = window.bonds().collect();
    let estimates = bonds
        .iter()
        .zip(sim.process().currents().iter().zip(&before))
        .map(|(&b, (&after, &start))| (after - start) as f64 / (clocks.rate(b) * horizon))
        .collect();
    Ok(PairCorrelation {
        rho,
        r,
        window,
        burn_in,
        horizon,
        seed,
        bonds,
        estimates,
        precondition_ok,
    })
}
