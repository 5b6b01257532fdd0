use serde::{Deserialize, Serialize};

use super::config::ShapeConfig;
use super::output::Table;
use super::RunOutput;
use crate::error::Result;
use crate::lpp::shape_probe_replicas;
use crate::stats::SampleStats;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeRow {
    pub x: f64,
    pub y: f64,
    pub n: usize,
    pub mean: f64,
    pub stderr: f64,
    /// `(√x + √y)²`.
    pub limit: f64,
    pub relative_error: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub config_hash: String,
    pub seed: u64,
    pub tolerance: f64,
    pub rows: Vec<ShapeRow>,
    pub passed: bool,
}

pub fn run_shape(cfg: &ShapeConfig, hash: &str) -> Result<RunOutput> {
    let mut table = Table::new(&["x", "y", "n", "replica", "T_over_n", "limit"]);
    let mut rows = Vec::new();
    for &(x, y) in &cfg.points {
        let values = shape_probe_replicas(x, y, cfg.n, cfg.replicas, cfg.seed)?;
        let limit = (x.sqrt() + y.sqrt()).powi(2);
        for (k, v) in values.iter().enumerate() {
            table.push(
                cfg.seed,
                hash,
                vec![
                    Table::float(x),
                    Table::float(y),
                    cfg.n.to_string(),
                    k.to_string(),
                    Table::float(*v),
                    Table::float(limit),
                ],
            );
        }
        let s = SampleStats::from_values(&values);
        let relative_error = (s.mean - limit).abs() / limit;
        rows.push(ShapeRow {
            x,
            y,
            n: cfg.n,
            mean: s.mean,
            stderr: s.stderr,
            limit,
            relative_error,
            pass: relative_error <= cfg.tolerance,
        });
    }
    let passed = rows.iter().all(|r| r.pass);
    let report = ShapeReport {
        config_hash: hash.to_string(),
        seed: cfg.seed,
        tolerance: cfg.tolerance,
        rows,
        passed,
    };
    RunOutput::new("shape", hash, passed, vec![("replicas".into(), table)], &report)
}
