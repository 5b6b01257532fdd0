//! Reproducible experiments built from the three model layers.
//!
//! A run is described by an [`ExperimentConfig`] (JSON, tagged by `kind`),
//! validated in full before any computation, and produces CSV tables plus a
//! JSON summary. Every CSV row carries the seed and the config hash; floats are
//! written with 17 significant digits.

mod compare;
mod config;
mod invariance;
mod kappa_sweep;
mod output;
mod paircorr;
mod shape;
mod simulate;

use std::path::{Path, PathBuf};

use serde::Serialize;

pub use compare::{default_half_width, run_compare, ComparisonReport, CurrentComparison, TwoLCheck, WindowComparison};
pub use config::{
    CompareConfig, Experiment, ExperimentConfig, InvarianceCandidate, InvarianceConfig, KappaSource, KappaSweepConfig,
    KappaUsed, PairCheck, PairCorrConfig, RateSource, ShapeConfig, ShockRunConfig,
};
pub use invariance::{run_invariance, CandidateOutcome, InvarianceSuiteReport, ShockDrift};
pub use kappa_sweep::{run_kappa_sweep, Extrapolation, KappaRow, KappaSweepReport, LipschitzCheck};
pub use output::{config_hash, fmt_float, to_json, write_outputs, Table};
pub use paircorr::{run_paircorr, PairCorrReport, PairOutcome};
pub use shape::{run_shape, ShapeReport, ShapeRow};
pub use simulate::{simulate_series, SeriesPoint, SimulateSpec};

use crate::error::Result;

/// Tables and summary of one run.
#[derive(Clone, Debug, Serialize)]
pub struct RunOutput {
    pub name: String,
    pub config_hash: String,
    pub passed: bool,
    pub tables: Vec<(String, Table)>,
    pub summary: serde_json::Value,
}

impl RunOutput {
    pub(crate) fn new<T: Serialize>(
        name: &str,
        hash: &str,
        passed: bool,
        tables: Vec<(String, Table)>,
        summary: &T,
    ) -> Result<Self> {
        Ok(RunOutput {
            name: name.to_string(),
            config_hash: hash.to_string(),
            passed,
            tables,
            summary: serde_json::to_value(summary)?,
        })
    }

    /// Writes each table as `<name>.csv` (or `<name>_<table>.csv`) and the summary as `<name>.json`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        for (k, (label, table)) in self.tables.iter().enumerate() {
            let file = if k == 0 {
                self.name.clone()
            } else {
                format!("{}_{label}", self.name)
            };
            let p = dir.join(format!("{file}.csv"));
            std::fs::write(&p, table.to_csv()?)?;
            paths.push(p);
        }
        let p = dir.join(format!("{}.json", self.name));
        std::fs::write(&p, to_json(&self.summary)?)?;
        paths.push(p);
        Ok(paths)
    }
}

/// Validates and runs any experiment.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    config.experiment.validate()?;
    let hash = config_hash(&config.experiment)?;
    match &config.experiment {
        Experiment::KappaSweep(c) => run_kappa_sweep(c, &hash),
        Experiment::Shape(c) => run_shape(c, &hash),
        Experiment::Compare(c) => run_compare(c, &hash),
        Experiment::Invariance(c) => run_invariance(c, &hash),
        Experiment::Paircorr(c) => run_paircorr(c, &hash),
    }
}
