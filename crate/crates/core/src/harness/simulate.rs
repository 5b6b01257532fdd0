use serde::{Deserialize, Serialize};

use super::output::Table;
use crate::error::{Error, Result};
use crate::hydro::{MacroProfile, ProfileSpec};
use crate::tasep::{init_from_profile, measure_density, BondClocks, Occupancies, Simulation, Window};

/// A plain simulation run sampled at evenly spaced macroscopic times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateSpec {
    pub r: f64,
    pub profile: ProfileSpec,
    pub n: usize,
    pub t: f64,
    pub seed: u64,
    pub windows: Vec<(f64, f64)>,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    /// `n⁻¹ Σ η` over the window.
    pub density: f64,
    /// `n⁻¹ J_{[na]}`.
    pub current: f64,
    /// Fraction of bonds in the window with `η_i = 1, η_{i+1} = 0`.
    pub paircorr: f64,
}

/// Runs the simulation and returns the time series, the final configuration and a table.
pub fn simulate_series(spec: &SimulateSpec, hash: &str) -> Result<(Vec<SeriesPoint>, Occupancies, Table)> {
    if spec.n == 0 || spec.steps == 0 || spec.t.is_nan() || spec.t < 0.0 {
        return Err(Error::param("n", "need n >= 1, steps >= 1 and t >= 0"));
    }
    let n = spec.n as f64;
    let extent = spec
        .windows
        .iter()
        .flat_map(|&(a, b)| [a.abs(), b.abs()])
        .fold(0.0, f64::max);
    let half_width = (n * (extent + 2.0 * spec.t)).ceil() as i64 + 100;
    let window = Window::closed(half_width)?;
    let cover = (-(half_width as f64) / n, half_width as f64 / n);
    let occ = init_from_profile(&MacroProfile::from_spec(&spec.profile)?, n, window, cover, spec.seed)?;
    let mut sim = Simulation::new(occ, &BondClocks::slow_bond(spec.r, spec.seed)?);
    let mut points = Vec::new();
    let mut table = Table::new(&["t", "a", "b", "density", "current", "paircorr"]);
    for k in 0..=spec.steps {
        let t = spec.t * k as f64 / spec.steps as f64;
        sim.run_until(n * t);
        let occ = sim.process().occupancies();
        for &(a, b) in &spec.windows {
            let (first, last) = ((n * a).floor() as i64 + 1, (n * b).floor() as i64);
            let pairs = (first..last).filter(|&i| occ.get(i) && !occ.get(i + 1)).count();
            let p = SeriesPoint {
                t,
                a,
                b,
                density: measure_density(occ, a, b, n)?,
                current: sim.process().current((n * a).floor() as i64) as f64 / n,
                paircorr: pairs as f64 / (last - first).max(1) as f64,
            };
            table.push(
                spec.seed,
                hash,
                [p.t, p.a, p.b, p.density, p.current, p.paircorr]
                    .iter()
                    .map(|x| Table::float(*x))
                    .collect(),
            );
            points.push(p);
        }
    }
    Ok((points, sim.process().occupancies().clone(), table))
}
