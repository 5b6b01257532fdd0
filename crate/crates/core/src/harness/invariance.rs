use serde::{Deserialize, Serialize};

use super::config::{InvarianceConfig, KappaUsed, ShockRunConfig};
use super::output::Table;
use super::RunOutput;
use crate::error::Result;
use crate::hydro::{invariance_check, InvarianceReport, MacroProfile, MacroRate};
use crate::tasep::{init_from_profile, measure_density, BondClocks, Simulation, Window};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateOutcome {
    pub name: String,
    pub expect_invariant: bool,
    pub report: InvarianceReport,
    pub matches_expectation: bool,
}

/// Location of the non-entropy shock from mass balance on `[−n, n]`:
/// with the shock at `s`, the mass is `1 + s(1 − 2ρ*)` in macroscopic units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShockDrift {
    pub r: f64,
    pub n: usize,
    pub rho_star: f64,
    pub times: Vec<f64>,
    pub locations: Vec<f64>,
    /// Final minus initial location, macroscopic units.
    pub drift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceSuiteReport {
    pub config_hash: String,
    pub lambda0: f64,
    pub rho_star: f64,
    pub kappa: Option<KappaUsed>,
    pub candidates: Vec<CandidateOutcome>,
    pub shock_drift: Option<ShockDrift>,
    pub passed: bool,
}

fn shock_drift(cfg: &ShockRunConfig, rate: &MacroRate) -> Result<ShockDrift> {
    let s = rate.rho_star();
    let n = cfg.n as f64;
    let profile = MacroProfile::step(1.0 - s, 0.0, s)?;
    let half_width = (n * (1.0 + 2.0 * cfg.t)).ceil() as i64 + 100;
    let window = Window::closed(half_width)?;
    let occ = init_from_profile(&profile, n, window, (-1.0, 1.0), cfg.seed)?;
    let mut sim = Simulation::new(occ, &BondClocks::slow_bond(cfg.r, cfg.seed)?);
    let mut times = Vec::with_capacity(cfg.samples + 1);
    let mut locations = Vec::with_capacity(cfg.samples + 1);
    for k in 0..=cfg.samples {
        let t = cfg.t * k as f64 / cfg.samples as f64;
        sim.run_until(n * t);
        let mass = measure_density(sim.process().occupancies(), -1.0, 1.0, n)?;
        times.push(t);
        locations.push((mass - 1.0) / (1.0 - 2.0 * s));
    }
    Ok(ShockDrift {
        r: cfg.r,
        n: cfg.n,
        rho_star: s,
        drift: locations[cfg.samples] - locations[0],
        times,
        locations,
    })
}

pub fn run_invariance(cfg: &InvarianceConfig, hash: &str) -> Result<RunOutput> {
    let (rate, kappa) = cfg.rate.resolve()?;
    let mut table = Table::new(&["candidate", "t", "max_deviation", "worst_x", "pass"]);
    let mut candidates = Vec::new();
    for cand in &cfg.candidates {
        let profile = MacroProfile::from_spec(&cand.profile)?;
        let report = invariance_check(&profile, &rate, &cfg.times)?;
        for c in &report.times {
            table.push(
                0,
                hash,
                vec![
                    cand.name.clone(),
                    Table::float(c.t),
                    Table::float(c.max_deviation),
                    Table::float(c.worst_x),
                    c.pass.to_string(),
                ],
            );
        }
        candidates.push(CandidateOutcome {
            name: cand.name.clone(),
            expect_invariant: cand.expect_invariant,
            matches_expectation: report.invariant == cand.expect_invariant,
            report,
        });
    }
    let shock = cfg.shock_run.as_ref().map(|s| shock_drift(s, &rate)).transpose()?;
    let mut tables = vec![("checks".to_string(), table)];
    if let (Some(d), Some(s)) = (&shock, &cfg.shock_run) {
        let mut t = Table::new(&["t", "shock_location"]);
        for (time, x) in d.times.iter().zip(&d.locations) {
            t.push(s.seed, hash, vec![Table::float(*time), Table::float(*x)]);
        }
        tables.push(("shock".into(), t));
    }
    let passed = candidates.iter().all(|c| c.matches_expectation);
    let report = InvarianceSuiteReport {
        config_hash: hash.to_string(),
        lambda0: rate.lambda0(),
        rho_star: rate.rho_star(),
        kappa,
        candidates,
        shock_drift: shock,
        passed,
    };
    RunOutput::new("invariance", hash, passed, tables, &report)
}
