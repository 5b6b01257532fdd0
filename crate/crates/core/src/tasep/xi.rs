use serde::{Deserialize, Serialize};

use super::clocks::{BondClocks, BondDriven, ClockQueue};
use crate::error::{Error, Result};

/// The interface `ξ^k` on `[−M, M]`, frozen at its initial shape outside.
///
/// `ξ^k_m` steps up at the epochs of bond `m + k` when the result still
/// satisfies `ξ_m ≤ ξ_{m−1}` and `ξ_m ≤ ξ_{m+1} + 1`. Sites beyond `±M` cannot
/// move before `ξ_{±M}` does, so the truncation is exact until one of the two
/// edge sites first jumps; [`XiProcess::edge_hit`] records that time.
#[derive(Clone, Debug, PartialEq)]
pub struct XiProcess {
    k: i64,
    half_width: i64,
    values: Vec<i64>,
    edge_hit: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiState {
    pub k: i64,
    pub time: f64,
    pub half_width: i64,
    /// `ξ^k_m` for `m = −M..=M`.
    pub values: Vec<i64>,
}

pub fn xi_initial(m: i64) -> i64 {
    (-m).max(0)
}

impl XiProcess {
    pub fn new(k: i64, half_width: i64) -> Result<Self> {
        if half_width < 1 {
            return Err(Error::param("half_width", "must be at least 1"));
        }
        Ok(XiProcess {
            k,
            half_width,
            values: (-half_width..=half_width).map(xi_initial).collect(),
            edge_hit: None,
        })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    /// Bonds whose clocks move this process.
    pub fn bonds(&self) -> std::ops::RangeInclusive<i64> {
        self.k - self.half_width..=self.k + self.half_width
    }

    pub fn get(&self, m: i64) -> i64 {
        if m.abs() <= self.half_width {
            self.values[(m + self.half_width) as usize]
        } else {
            xi_initial(m)
        }
    }

    pub fn edge_hit(&self) -> Option<f64> {
        self.edge_hit
    }

    /// Both inequalities hold at every site of the truncated interface.
    pub fn satisfies_constraints(&self) -> bool {
        (-self.half_width..=self.half_width).all(|m| {
            let v = self.get(m);
            v <= self.get(m - 1) && v <= self.get(m + 1) + 1
        })
    }

    pub fn try_raise(&mut self, m: i64, time: f64) -> bool {
        if m.abs() > self.half_width {
            return false;
        }
        let v = self.get(m) + 1;
        if v <= self.get(m - 1) && v <= self.get(m + 1) + 1 {
            self.values[(m + self.half_width) as usize] = v;
            if m.abs() == self.half_width && self.edge_hit.is_none() {
                self.edge_hit = Some(time);
            }
            true
        } else {
            false
        }
    }

    pub fn state(&self, time: f64) -> XiState {
        XiState {
            k: self.k,
            time,
            half_width: self.half_width,
            values: self.values.clone(),
        }
    }

    pub(crate) fn check_margin(&self, until: f64) -> Result<()> {
        match self.edge_hit {
            Some(t) if t <= until => Err(Error::MarginViolated(format!(
                "xi^{} reached its edge at time {t}; widen the window beyond {}",
                self.k, self.half_width
            ))),
            _ => Ok(()),
        }
    }
}

impl BondDriven for XiProcess {
    fn on_epoch(&mut self, bond: i64, time: f64) {
        self.try_raise(bond - self.k, time);
    }
}

/// Snapshots of `ξ^k` at the requested times (sorted, nonnegative).
pub fn simulate_xi(k: i64, clocks: &BondClocks, half_width: i64, sample_times: &[f64]) -> Result<Vec<XiState>> {
    if sample_times.iter().any(|t| *t < 0.0) || sample_times.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidInput(
            "sample times must be sorted and nonnegative".into(),
        ));
    }
    let mut xi = XiProcess::new(k, half_width)?;
    let mut q = ClockQueue::new(clocks, xi.bonds());
    let mut out = Vec::with_capacity(sample_times.len());
    for &t in sample_times {
        q.advance_to(t, |b, s| xi.on_epoch(b, s));
        out.push(xi.state(t));
    }
    xi.check_margin(sample_times.last().copied().unwrap_or(0.0))?;
    Ok(out)
}

/// First times `L^k(m, j)` at which `ξ^k_m ≥ j`, for each `(m, j)` target.
///
/// Targets on the boundary (`j ≤ max(0, −m)`) have time 0.
pub fn level_crossings(
    k: i64,
    clocks: &BondClocks,
    half_width: i64,
    targets: &[(i64, i64)],
    max_time: f64,
) -> Result<Vec<f64>> {
    if let Some((m, _)) = targets.iter().find(|(m, _)| m.abs() >= half_width) {
        return Err(Error::InvalidInput(format!("target site {m} not inside ±{half_width}")));
    }
    let mut xi = XiProcess::new(k, half_width)?;
    let mut hit: Vec<Option<f64>> = targets
        .iter()
        .map(|&(m, j)| (j <= xi_initial(m)).then_some(0.0))
        .collect();
    let mut pending = hit.iter().filter(|h| h.is_none()).count();
    let mut q = ClockQueue::new(clocks, xi.bonds());
    let mut horizon = 0.0;
    while pending > 0 && horizon < max_time {
        horizon = (horizon + 1.0).min(max_time);
        q.advance_to(horizon, |b, s| {
            let m = b - k;
            if xi.try_raise(m, s) {
                let v = xi.get(m);
                for (slot, &(tm, tj)) in hit.iter_mut().zip(targets) {
                    if slot.is_none() && tm == m && v >= tj {
                        *slot = Some(s);
                        pending -= 1;
                    }
                }
            }
        });
    }
    let times: Vec<f64> = hit
        .into_iter()
        .map(|h| h.ok_or_else(|| Error::InvalidInput(format!("targets not reached by time {max_time}"))))
        .collect::<Result<_>>()?;
    let last = times.iter().copied().fold(0.0, f64::max);
    xi.check_margin(last)?;
    Ok(times)
}
