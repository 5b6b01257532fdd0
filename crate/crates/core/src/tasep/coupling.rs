use serde::{Deserialize, Serialize};

use super::clocks::{BondClocks, BondDriven, ClockQueue};
use super::heights::{HeightConfig, HeightProcess};
use super::xi::XiProcess;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingMismatch {
    pub sample: usize,
    pub site: i64,
    pub direct: i64,
    pub variational: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingReport {
    pub sample_times: Vec<f64>,
    pub sites: (i64, i64),
    pub k_range: (i64, i64),
    pub xi_half_width: i64,
    pub comparisons: u64,
    pub mismatches: Vec<CouplingMismatch>,
}

impl CouplingReport {
    pub fn exact(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks `z_i(t) = max_k { z_k(0) − ξ^k_{i−k}(t) }` with shared clocks.
///
/// `z0` lives on a closed window `[−L, L]`; outside it the heights are extended
/// as constants, i.e. the sites there are empty. Each `ξ^k` is simulated on
/// `[−M, M]` with `M = xi_half_width`, and the maximum runs over
/// `k ∈ [i−M−1, i+M+1]`. Terms further out never win as long as both edges of
/// every `ξ^k` stay put: for `k < i−M−1`, `ξ^k_{i−k} ≥ 0` and `z_k(0) ≤ z_{i−M−1}(0)`
/// bound the term by the `k = i−M−1` term, whose `ξ` value is still `0`; for
/// `k > i+M+1`, `ξ^k_{i−k} ≥ k−i` and `z_k(0) ≤ z_{i+M+1}(0) + k−i−M−1` bound it
/// by the `k = i+M+1` term, whose `ξ` value is still `M+1`.
///
/// The closed window matches the infinite lattice as long as no particle
/// reaches site `L`, which is checked at the end.
pub fn coupling_check(
    z0: &HeightConfig,
    clocks: &BondClocks,
    sample_times: &[f64],
    xi_half_width: i64,
) -> Result<CouplingReport> {
    if sample_times.iter().any(|t| *t < 0.0) || sample_times.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidInput(
            "sample times must be sorted and nonnegative".into(),
        ));
    }
    let m = xi_half_width;
    let (lo, hi) = (z0.first_index(), z0.last_index());
    let (k_lo, k_hi) = (lo - m - 1, hi + m + 1);
    let mut z = HeightProcess::new(z0.clone());
    let mut xis: Vec<XiProcess> = (k_lo..=k_hi).map(|k| XiProcess::new(k, m)).collect::<Result<_>>()?;
    let window_bonds = z0.window().bonds();
    let mut queue = ClockQueue::new(clocks, k_lo - m..=k_hi + m);
    let mut report = CouplingReport {
        sample_times: sample_times.to_vec(),
        sites: (lo, hi),
        k_range: (k_lo, k_hi),
        xi_half_width: m,
        comparisons: 0,
        mismatches: Vec::new(),
    };
    for (s, &t) in sample_times.iter().enumerate() {
        queue.advance_to(t, |bond, time| {
            if window_bonds.contains(&bond) {
                z.on_epoch(bond, time);
            }
            for k in (bond - m).max(k_lo)..=(bond + m).min(k_hi) {
                xis[(k - k_lo) as usize].on_epoch(bond, time);
            }
        });
        for i in lo..=hi {
            let variational = (i - m - 1..=i + m + 1)
                .map(|k| z0.get(k) - xis[(k - k_lo) as usize].get(i - k))
                .max()
                .expect("nonempty k range");
            let direct = z.heights().get(i);
            report.comparisons += 1;
            if direct != variational {
                report.mismatches.push(CouplingMismatch {
                    sample: s,
                    site: i,
                    direct,
                    variational,
                });
            }
        }
    }
    let end = sample_times.last().copied().unwrap_or(0.0);
    for xi in &xis {
        xi.check_margin(end)?;
    }
    let l = z0.window().half_width;
    if z.heights().get(l) != z.heights().get(l - 1) {
        return Err(Error::MarginViolated(format!("a particle reached the right edge {l}")));
    }
    Ok(report)
}
