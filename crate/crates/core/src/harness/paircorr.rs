use serde::{Deserialize, Serialize};

use super::config::{KappaUsed, PairCorrConfig};
use super::output::Table;
use super::RunOutput;
use crate::error::Result;
use crate::tasep::{stationary_pair_correlation, Window};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairOutcome {
    pub bond: i64,
    pub estimate: f64,
    /// `ρ(1−ρ)/rate_i`.
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCorrReport {
    pub config_hash: String,
    pub seed: u64,
    pub rho: f64,
    pub r: f64,
    pub ring_sites: usize,
    pub kappa: Option<KappaUsed>,
    pub precondition_ok: bool,
    pub checks: Vec<PairOutcome>,
    pub passed: bool,
}

pub fn run_paircorr(cfg: &PairCorrConfig, hash: &str) -> Result<RunOutput> {
    let kappa = cfg.kappa.as_ref().map(|k| k.resolve(cfg.r)).transpose()?;
    let ring = Window::periodic((cfg.sites / 2) as i64)?;
    let pc = stationary_pair_correlation(
        cfg.rho,
        cfg.r,
        ring,
        cfg.burn_in,
        cfg.horizon,
        cfg.seed,
        kappa.as_ref().map(|k| k.rho_star),
    )?;
    let flux = cfg.rho * (1.0 - cfg.rho);
    let rate = |b: i64| if b == 0 { cfg.r } else { 1.0 };
    let mut table = Table::new(&["bond", "rate", "estimate", "expected"]);
    for (&b, &e) in pc.bonds.iter().zip(&pc.estimates) {
        table.push(
            cfg.seed,
            hash,
            vec![
                b.to_string(),
                Table::float(rate(b)),
                Table::float(e),
                Table::float(flux / rate(b)),
            ],
        );
    }
    let checks: Vec<PairOutcome> = cfg
        .checks
        .iter()
        .map(|c| {
            let estimate = pc.at(c.bond).unwrap_or(f64::NAN);
            let expected = flux / rate(c.bond);
            PairOutcome {
                bond: c.bond,
                estimate,
                expected,
                tolerance: c.tolerance,
                pass: (estimate - expected).abs() <= c.tolerance,
            }
        })
        .collect();
    let passed = checks.iter().all(|c| c.pass);
    let report = PairCorrReport {
        config_hash: hash.to_string(),
        seed: cfg.seed,
        rho: cfg.rho,
        r: cfg.r,
        ring_sites: ring.len(),
        kappa,
        precondition_ok: pc.precondition_ok,
        checks,
        passed,
    };
    RunOutput::new("paircorr", hash, passed, vec![("bonds".into(), table)], &report)
}
