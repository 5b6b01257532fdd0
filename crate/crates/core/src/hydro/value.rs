use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cost::{classify, cost_in_case};
use super::shape::golden_max;
use super::{f0, MacroProfile, MacroRate};
use crate::error::{Error, Result};

/// How the supremum over the starting point `q` is located.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupMethod {
    /// Evaluate every endpoint and stationary point of the concave pieces.
    #[default]
    Analytic,
    /// 2000-point scan of the window, then golden-section refinement to 1e−8.
    DenseGrid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HydroSolution {
    pub t: f64,
    pub lambda0: f64,
    pub mesh: Vec<f64>,
    pub v_values: Vec<f64>,
    /// Empty when the mesh has a single point.
    pub rho_values: Vec<f64>,
    pub argmax_q: Vec<f64>,
}

const WINDOW_MARGIN: f64 = 1.0;
const DENSITY_SLACK: f64 = 1e-6;

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("time must be positive, got {t}")))
    }
}

/// Search window for `q`. To the left of `min(x−t, −Bt)` the cost vanishes and
/// `v₀` is nondecreasing; to the right of `max(x+t, Bt)` the cost grows with
/// slope 1, at least as fast as `v₀`. Either way the objective moves toward the window.
fn q_window(x: f64, t: f64, rate: &MacroRate) -> (f64, f64) {
    let bt = rate.b() * t;
    ((x - t).min(-bt) - WINDOW_MARGIN, (x + t).max(bt) + WINDOW_MARGIN)
}

fn objective(profile: &MacroProfile, x: f64, t: f64, q: f64, rate: &MacroRate) -> f64 {
    // classify only fails for bad t, which callers have checked
    let case = classify(x, t, q, rate).expect("time already validated");
    profile.v0(q) - cost_in_case(case, x, t, q, rate)
}

fn candidates(profile: &MacroProfile, x: f64, t: f64, rate: &MacroRate, lo: f64, hi: f64) -> Vec<f64> {
    let bt = rate.b() * t;
    let reach = (bt.sqrt() - x.abs().sqrt()).max(0.0).powi(2);
    let mut qs = vec![lo, hi, 0.0, x - t, x + t, x - bt, x + bt, reach, -reach];
    qs.extend_from_slice(profile.breaks());
    // interior maximum of ρq − t·¼(1 − (x−q)/t)²
    qs.extend(profile.densities().iter().map(|&rho| x - t * (1.0 - 2.0 * rho)));
    qs.retain(|q| (lo..=hi).contains(q));
    qs
}

/// `v(x,t) = sup_q { v₀(q) − I(x,t,q) }` and a maximizing `q`.
pub fn value_at(profile: &MacroProfile, x: f64, t: f64, rate: &MacroRate, method: SupMethod) -> Result<(f64, f64)> {
    check_time(t)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    let (lo, hi) = q_window(x, t, rate);
    let f = |q: f64| objective(profile, x, t, q, rate);
    let best = match method {
        SupMethod::Analytic => candidates(profile, x, t, rate, lo, hi)
            .into_iter()
            .map(|q| (q, f(q)))
            .fold((lo, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a }),
        SupMethod::DenseGrid => {
            let n = 2000;
            let h = (hi - lo) / n as f64;
            let (k, _) = (0..=n)
                .map(|k| (k, f(lo + h * k as f64)))
                .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
            let a = (lo + h * (k as f64 - 1.0)).max(lo);
            let b = (lo + h * (k as f64 + 1.0)).min(hi);
            golden_max(f, a, b, 1e-8)
        }
    };
    Ok((best.1, best.0))
}

pub fn value_function(profile: &MacroProfile, t: f64, rate: &MacroRate, x_grid: &[f64]) -> Result<HydroSolution> {
    value_function_with(profile, t, rate, x_grid, SupMethod::Analytic)
}

pub fn value_function_with(
    profile: &MacroProfile,
    t: f64,
    rate: &MacroRate,
    x_grid: &[f64],
    method: SupMethod,
) -> Result<HydroSolution> {
    check_time(t)?;
    if x_grid.is_empty() || x_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "mesh must be nonempty and strictly increasing".into(),
        ));
    }
    let pairs: Vec<(f64, f64)> = x_grid
        .par_iter()
        .map(|&x| value_at(profile, x, t, rate, method))
        .collect::<Result<_>>()?;
    let mut solution = HydroSolution {
        t,
        lambda0: rate.lambda0(),
        mesh: x_grid.to_vec(),
        v_values: pairs.iter().map(|p| p.0).collect(),
        rho_values: Vec::new(),
        argmax_q: pairs.iter().map(|p| p.1).collect(),
    };
    if x_grid.len() >= 2 {
        solution.rho_values = density(&solution)?;
    }
    Ok(solution)
}

/// Finite-difference density: centered inside, one-sided at the ends.
pub fn density(solution: &HydroSolution) -> Result<Vec<f64>> {
    let (x, v) = (&solution.mesh, &solution.v_values);
    let n = x.len();
    if n < 2 || v.len() != n {
        return Err(Error::InvalidInput("density needs at least two mesh points".into()));
    }
    let mut rho: Vec<f64> = (0..n)
        .map(|i| {
            let (a, b) = (i.saturating_sub(1), (i + 1).min(n - 1));
            (v[b] - v[a]) / (x[b] - x[a])
        })
        .collect();
    let stray = rho
        .iter()
        .filter(|r| **r < -DENSITY_SLACK || **r > 1.0 + DENSITY_SLACK)
        .count();
    if stray > 0 {
        warn!("{stray} finite-difference densities outside [0, 1]; clamped");
    }
    for r in &mut rho {
        *r = r.clamp(-DENSITY_SLACK, 1.0 + DENSITY_SLACK);
    }
    Ok(rho)
}

pub fn uniform_mesh(xmin: f64, xmax: f64, points: usize) -> Result<Vec<f64>> {
    if !(xmin.is_finite() && xmax.is_finite()) || points == 0 || (points > 1 && xmax <= xmin) {
        return Err(Error::InvalidInput(format!(
            "bad mesh [{xmin}, {xmax}] with {points} points"
        )));
    }
    if points == 1 {
        return Ok(vec![xmin]);
    }
    let h = (xmax - xmin) / (points - 1) as f64;
    Ok((0..points)
        .map(|k| if k + 1 == points { xmax } else { xmin + h * k as f64 })
        .collect())
}

/// Closed-form `v(x,t)` for the flat initial profile `v₀(q) = ρq`.
pub fn flat_profile_oracle(rho: f64, rate: &MacroRate, x: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    let flux = f0(rho)?;
    let s = rate.rho_star();
    let undisturbed = rho * x - t * flux;
    if rate.is_homogeneous() || rho <= s || rho >= 1.0 - s {
        return Ok(undisturbed);
    }
    let blocked = 0.25 * t * rate.lambda0();
    Ok(if -t * (rho - s) <= x && x <= 0.0 {
        (1.0 - s) * x - blocked
    } else if 0.0 < x && x <= t * (1.0 - s - rho) {
        s * x - blocked
    } else {
        undisturbed
    })
}
