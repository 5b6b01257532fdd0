use serde::{Deserialize, Serialize};

use super::config::KappaSweepConfig;
use super::output::Table;
use super::RunOutput;
use crate::error::Result;
use crate::lpp::{estimate_kappa, kappa_bounds, KappaEstimate};
use crate::stats::{fit_finite_size, SampleStats};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaRow {
    pub r: f64,
    pub n: usize,
    pub replicas: usize,
    pub mean: f64,
    pub stderr: f64,
    pub lower: f64,
    pub upper: f64,
    /// `0.9·lower ≤ mean ≤ upper + 2·stderr`.
    pub within_bounds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub r: f64,
    /// Intercept of `a + b·n^{-1/3}`.
    pub kappa_inf: f64,
    pub slope: f64,
}

/// Paired difference between neighbouring rates at one size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzCheck {
    pub n: usize,
    pub r1: f64,
    pub r2: f64,
    pub difference: f64,
    pub stderr: f64,
    /// `1/r₁ − 1/r₂`.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaSweepReport {
    pub config_hash: String,
    pub seed: u64,
    pub rows: Vec<KappaRow>,
    pub extrapolations: Vec<Extrapolation>,
    /// Every replica's `T/n` is nonincreasing in `r` (shared noise).
    pub per_sample_monotone: bool,
    pub lipschitz: Vec<LipschitzCheck>,
    pub passed: bool,
}

pub fn run_kappa_sweep(cfg: &KappaSweepConfig, hash: &str) -> Result<RunOutput> {
    let mut rates = cfg.rates.clone();
    rates.sort_by(f64::total_cmp);
    rates.dedup();
    let mut estimates: Vec<Vec<KappaEstimate>> = Vec::new();
    for &n in &cfg.ladder {
        estimates.push(
            rates
                .iter()
                .map(|&r| estimate_kappa(r, n, cfg.replicas, cfg.seed))
                .collect::<Result<_>>()?,
        );
    }

    let mut replica_table = Table::new(&["r", "n", "replica", "T_over_n"]);
    let mut summary_table = Table::new(&[
        "r",
        "n",
        "replicas",
        "mean",
        "stderr",
        "lower",
        "upper",
        "within_bounds",
    ]);
    let mut rows = Vec::new();
    for row in &estimates {
        for e in row {
            for (k, v) in e.per_replica.iter().enumerate() {
                replica_table.push(
                    cfg.seed,
                    hash,
                    vec![Table::float(e.r), e.n.to_string(), k.to_string(), Table::float(*v)],
                );
            }
            let b = kappa_bounds(e.r)?;
            let within = 0.9 * b.lower <= e.mean && e.mean <= b.upper + 2.0 * e.stderr;
            summary_table.push(
                cfg.seed,
                hash,
                vec![
                    Table::float(e.r),
                    e.n.to_string(),
                    e.replicas.to_string(),
                    Table::float(e.mean),
                    Table::float(e.stderr),
                    Table::float(b.lower),
                    Table::float(b.upper),
                    within.to_string(),
                ],
            );
            rows.push(KappaRow {
                r: e.r,
                n: e.n,
                replicas: e.replicas,
                mean: e.mean,
                stderr: e.stderr,
                lower: b.lower,
                upper: b.upper,
                within_bounds: within,
            });
        }
    }

    let mut extrapolations = Vec::new();
    if cfg.extrapolate && cfg.ladder.len() >= 2 {
        for (k, &r) in rates.iter().enumerate() {
            let points: Vec<(usize, f64)> = estimates.iter().map(|row| (row[k].n, row[k].mean)).collect();
            if let Some((a, b)) = fit_finite_size(&points) {
                extrapolations.push(Extrapolation {
                    r,
                    kappa_inf: a,
                    slope: b,
                });
            }
        }
    }

    let mut per_sample_monotone = true;
    let mut lipschitz = Vec::new();
    for row in &estimates {
        for pair in row.windows(2) {
            let (lo, hi) = (&pair[0], &pair[1]);
            let diffs: Vec<f64> = lo.per_replica.iter().zip(&hi.per_replica).map(|(a, b)| a - b).collect();
            per_sample_monotone &= diffs.iter().all(|d| *d >= 0.0);
            let s = SampleStats::from_values(&diffs);
            let bound = 1.0 / lo.r - 1.0 / hi.r;
            lipschitz.push(LipschitzCheck {
                n: lo.n,
                r1: lo.r,
                r2: hi.r,
                difference: s.mean,
                stderr: s.stderr,
                bound,
                pass: s.mean >= 0.0 && s.mean <= bound + 4.0 * s.stderr,
            });
        }
    }

    let passed = per_sample_monotone && rows.iter().all(|r| r.within_bounds) && lipschitz.iter().all(|l| l.pass);
    let report = KappaSweepReport {
        config_hash: hash.to_string(),
        seed: cfg.seed,
        rows,
        extrapolations,
        per_sample_monotone,
        lipschitz,
        passed,
    };
    RunOutput::new(
        "kappa_sweep",
        hash,
        passed,
        vec![("replicas".into(), replica_table), ("summary".into(), summary_table)],
        &report,
    )
}
