use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::corner_passage;
use crate::error::{check_rate, Error, Result};
use crate::stats::SampleStats;

/// Monte Carlo estimate of `κ(r) = lim T_{n,n}/n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaEstimate {
    pub r: f64,
    pub n: usize,
    pub replicas: usize,
    pub seed: u64,
    pub mean: f64,
    pub stderr: f64,
    pub per_replica: Vec<f64>,
}

/// Replicate `k` uses stream key `(seed, k)`; replicas run in parallel and the
/// result is independent of scheduling. Raw `T/n` is reported; it sits below
/// `κ(r)` on average because `E T_{n,n}` is superadditive in `n`.
pub fn estimate_kappa(r: f64, n: usize, replicas: usize, seed: u64) -> Result<KappaEstimate> {
    check_rate(r)?;
    if n == 0 {
        return Err(Error::param("n", "grid size must be at least 1"));
    }
    if replicas == 0 {
        return Err(Error::param("replicas", "need at least one replica"));
    }
    let per_replica = (0..replicas as u64)
        .into_par_iter()
        .map(|k| corner_passage(n, n, r, seed, k).map(|t| t / n as f64))
        .collect::<Result<Vec<_>>>()?;
    let stats = SampleStats::from_values(&per_replica);
    Ok(KappaEstimate {
        r,
        n,
        replicas,
        seed,
        mean: stats.mean,
        stderr: stats.stderr,
        per_replica,
    })
}

/// Rigorous bracket for `κ(r)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaBounds {
    pub r: f64,
    pub lower: f64,
    pub upper: f64,
}

/// `max{4, 3/2 + (r² + 2(1+r)) / (2r(1+r))}`, improved for `r ≤ 1/2` by
/// `1/(r(1−r))`; upper bound `3 + 1/r`.
pub fn kappa_bounds(r: f64) -> Result<KappaBounds> {
    check_rate(r)?;
    let path_bound = 1.5 + (r * r + 2.0 * (1.0 + r)) / (2.0 * r * (1.0 + r));
    let mut lower = f64::max(4.0, path_bound);
    if r <= 0.5 {
        lower = lower.max(1.0 / (r * (1.0 - r)));
    }
    Ok(KappaBounds {
        r,
        lower,
        upper: 3.0 + 1.0 / r,
    })
}

/// Estimates within this distance below 4 are treated as 4.
///
/// Finite-`n` estimates of `κ(1) = 4` fall short by roughly `c·n^{-1/3}`
/// (about 0.04 at `n = 1500`, 0.2 at `n = 20`).
pub const KAPPA_FLOOR_TOLERANCE: f64 = 0.25;

/// `λ(0) = 4/κ` with [`KAPPA_FLOOR_TOLERANCE`].
pub fn lambda0_from_kappa(kappa: f64) -> Result<f64> {
    lambda0_from_kappa_with_tolerance(kappa, KAPPA_FLOOR_TOLERANCE)
}

pub fn lambda0_from_kappa_with_tolerance(kappa: f64, tolerance: f64) -> Result<f64> {
    if !kappa.is_finite() || kappa < 4.0 - tolerance {
        return Err(Error::Domain(format!(
            "kappa = {kappa} is below the floor 4 (tolerance {tolerance})"
        )));
    }
    Ok(4.0 / kappa.max(4.0))
}

/// `T_{⌊nx⌋,⌊ny⌋}/n` on a homogeneous grid (`r = 1`), replica 0 of `seed`.
pub fn shape_probe(x: f64, y: f64, n: usize, seed: u64) -> Result<f64> {
    shape_probe_at(x, y, n, seed, 0)
}

/// Independent replicas of [`shape_probe`], keyed `(seed, k)`.
pub fn shape_probe_replicas(x: f64, y: f64, n: usize, replicas: usize, seed: u64) -> Result<Vec<f64>> {
    (0..replicas as u64)
        .into_par_iter()
        .map(|k| shape_probe_at(x, y, n, seed, k))
        .collect()
}

fn shape_probe_at(x: f64, y: f64, n: usize, seed: u64, replica: u64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::param("x, y", format!("need positive direction, got ({x}, {y})")));
    }
    let rows = (n as f64 * x).floor() as usize;
    let cols = (n as f64 * y).floor() as usize;
    if rows == 0 || cols == 0 {
        return Err(Error::param(
            "n",
            format!("⌊n·x⌋ and ⌊n·y⌋ must be ≥ 1 (got {rows}, {cols})"),
        ));
    }
    Ok(corner_passage(rows, cols, 1.0, seed, replica)? / n as f64)
}
