use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{CompareConfig, KappaUsed};
use super::output::Table;
use super::RunOutput;
use crate::error::{Error, Result};
use crate::hydro::{value_at, MacroProfile, MacroRate, SupMethod};
use crate::stats::SampleStats;
use crate::tasep::{init_from_profile_replica, measure_density, BondClocks, Simulation, Window};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowComparison {
    pub a: f64,
    pub b: f64,
    /// `n⁻¹ Σ_{i=[na]+1}^{[nb]} η_i(nt)`, averaged over replicas.
    pub micro_mass: f64,
    pub micro_stderr: f64,
    /// `v(b,t) − v(a,t)`.
    pub macro_mass: f64,
    pub mass_discrepancy: f64,
    /// Mass divided by `b − a`.
    pub micro_density: f64,
    pub macro_density: f64,
    pub density_discrepancy: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurrentComparison {
    pub a: f64,
    pub bond: i64,
    /// `n⁻¹ J_{[na]}(nt)`, averaged over replicas.
    pub micro: f64,
    pub micro_stderr: f64,
    /// `v₀(a) − v(a,t)`.
    pub macro_value: f64,
    pub discrepancy: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoLCheck {
    pub half_width: i64,
    /// Largest difference between the two runs over all observables.
    pub max_difference: f64,
    pub allowance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub config_hash: String,
    pub seed: u64,
    pub r: f64,
    pub n: usize,
    pub t: f64,
    pub replicas: usize,
    pub half_width: i64,
    pub kappa: KappaUsed,
    pub windows: Vec<WindowComparison>,
    pub currents: Vec<CurrentComparison>,
    pub sup_density_discrepancy: f64,
    /// Sum of window mass discrepancies.
    pub l1_mass_discrepancy: f64,
    pub sup_current_discrepancy: f64,
    pub two_l: Option<TwoLCheck>,
    pub runtime_seconds: f64,
    pub passed: bool,
}

/// `⌈n·(max(|a|,|b|) + 2t)⌉ + 100` over all windows and current points.
pub fn default_half_width(cfg: &CompareConfig) -> i64 {
    let extent = cfg
        .windows
        .iter()
        .flat_map(|&(a, b)| [a.abs(), b.abs()])
        .chain(cfg.current_points.iter().map(|a| a.abs()))
        .fold(0.0, f64::max);
    (cfg.n as f64 * (extent + 2.0 * cfg.t)).ceil() as i64 + 100
}

/// Per-replica masses (one per window) and currents (one per point).
type Observation = (Vec<f64>, Vec<f64>);

fn simulate(cfg: &CompareConfig, profile: &MacroProfile, half_width: i64) -> Result<Vec<Observation>> {
    let n = cfg.n as f64;
    let window = Window::closed(half_width)?;
    let cover = (-(half_width as f64) / n, half_width as f64 / n);
    (0..cfg.replicas as u64)
        .into_par_iter()
        .map(|k| {
            let occ = init_from_profile_replica(profile, n, window, cover, cfg.seed, k)?;
            let clocks = BondClocks::slow_bond(cfg.r, cfg.seed)?.with_replica(k);
            let mut sim = Simulation::new(occ, &clocks);
            sim.run_until(n * cfg.t);
            let occ = sim.process().occupancies();
            let masses = cfg
                .windows
                .iter()
                .map(|&(a, b)| measure_density(occ, a, b, n))
                .collect::<Result<_>>()?;
            let currents = cfg
                .current_points
                .iter()
                .map(|&a| sim.process().current((n * a).floor() as i64) as f64 / n)
                .collect();
            Ok((masses, currents))
        })
        .collect()
}

fn column(obs: &[Observation], pick: impl Fn(&Observation) -> f64) -> SampleStats {
    SampleStats::from_values(&obs.iter().map(pick).collect::<Vec<_>>())
}

pub fn run_compare(cfg: &CompareConfig, hash: &str) -> Result<RunOutput> {
    let started = Instant::now();
    let profile = MacroProfile::from_spec(&cfg.profile)?;
    let default = default_half_width(cfg);
    let half_width = cfg.half_width.unwrap_or(default);
    if half_width < default {
        return Err(Error::MarginViolated(format!(
            "half-width {half_width} is below the light-cone default {default}"
        )));
    }
    let kappa = cfg.kappa.resolve(cfg.r)?;
    let rate = MacroRate::new(kappa.lambda0)?;
    let v = |x: f64| -> Result<f64> {
        if cfg.t == 0.0 {
            Ok(profile.v0(x))
        } else {
            value_at(&profile, x, cfg.t, &rate, SupMethod::Analytic).map(|p| p.0)
        }
    };

    let obs = simulate(cfg, &profile, half_width)?;
    let mut table = Table::new(&["observable", "a", "b", "replica", "micro", "macro"]);
    let mut windows = Vec::new();
    for (w, &(a, b)) in cfg.windows.iter().enumerate() {
        let macro_mass = v(b)? - v(a)?;
        for (k, o) in obs.iter().enumerate() {
            table.push(
                cfg.seed,
                hash,
                vec![
                    "mass".into(),
                    Table::float(a),
                    Table::float(b),
                    k.to_string(),
                    Table::float(o.0[w]),
                    Table::float(macro_mass),
                ],
            );
        }
        let s = column(&obs, |o| o.0[w]);
        let density_discrepancy = (s.mean - macro_mass).abs() / (b - a);
        windows.push(WindowComparison {
            a,
            b,
            micro_mass: s.mean,
            micro_stderr: s.stderr,
            macro_mass,
            mass_discrepancy: (s.mean - macro_mass).abs(),
            micro_density: s.mean / (b - a),
            macro_density: macro_mass / (b - a),
            density_discrepancy,
            pass: density_discrepancy <= cfg.density_tolerance,
        });
    }
    let mut currents = Vec::new();
    for (p, &a) in cfg.current_points.iter().enumerate() {
        let macro_value = profile.v0(a) - v(a)?;
        for (k, o) in obs.iter().enumerate() {
            table.push(
                cfg.seed,
                hash,
                vec![
                    "current".into(),
                    Table::float(a),
                    Table::float(a),
                    k.to_string(),
                    Table::float(o.1[p]),
                    Table::float(macro_value),
                ],
            );
        }
        let s = column(&obs, |o| o.1[p]);
        let discrepancy = (s.mean - macro_value).abs();
        currents.push(CurrentComparison {
            a,
            bond: (cfg.n as f64 * a).floor() as i64,
            micro: s.mean,
            micro_stderr: s.stderr,
            macro_value,
            discrepancy,
            pass: discrepancy <= cfg.current_tolerance,
        });
    }

    let two_l = if cfg.two_l_check {
        let wide = simulate(cfg, &profile, 2 * half_width)?;
        let mut max_difference: f64 = 0.0;
        let mut allowance: f64 = 0.0;
        let obs_count = cfg.windows.len() + cfg.current_points.len();
        for j in 0..obs_count {
            let pick = |o: &Observation| {
                if j < cfg.windows.len() {
                    o.0[j]
                } else {
                    o.1[j - cfg.windows.len()]
                }
            };
            let (s1, s2) = (column(&obs, pick), column(&wide, pick));
            max_difference = max_difference.max((s1.mean - s2.mean).abs());
            let se = (s1.stderr.powi(2) + s2.stderr.powi(2)).sqrt();
            allowance = allowance.max(4.0 * se);
        }
        // a single replica has no error estimate; fall back to half the density tolerance
        let allowance = allowance.max(0.5 * cfg.density_tolerance);
        Some(TwoLCheck {
            half_width: 2 * half_width,
            max_difference,
            allowance,
            pass: max_difference <= allowance,
        })
    } else {
        None
    };

    let sup_density_discrepancy = windows.iter().map(|w| w.density_discrepancy).fold(0.0, f64::max);
    let l1_mass_discrepancy = windows.iter().map(|w| w.mass_discrepancy).sum();
    let sup_current_discrepancy = currents.iter().map(|c| c.discrepancy).fold(0.0, f64::max);
    let passed =
        windows.iter().all(|w| w.pass) && currents.iter().all(|c| c.pass) && two_l.as_ref().is_none_or(|c| c.pass);
    let report = ComparisonReport {
        config_hash: hash.to_string(),
        seed: cfg.seed,
        r: cfg.r,
        n: cfg.n,
        t: cfg.t,
        replicas: cfg.replicas,
        half_width,
        kappa,
        windows,
        currents,
        sup_density_discrepancy,
        l1_mass_discrepancy,
        sup_current_discrepancy,
        two_l,
        runtime_seconds: started.elapsed().as_secs_f64(),
        passed,
    };
    RunOutput::new("compare", hash, passed, vec![("replicas".into(), table)], &report)
}
