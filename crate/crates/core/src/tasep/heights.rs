use super::clocks::{BondClocks, BondDriven, ClockQueue};
use super::window::{Boundary, Occupancies, Window};
use crate::error::{Error, Result};

/// Heights `z_i` for `i ∈ [−L−1, L]` on a closed window, with `η_i = z_i − z_{i−1}`.
///
/// `z_i` steps down by one at the epochs of bond `i` whenever that keeps every
/// increment in `{0, 1}`; this moves the particle at `i` to `i+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightConfig {
    window: Window,
    heights: Vec<i64>,
}

impl HeightConfig {
    pub fn new(window: Window, heights: Vec<i64>) -> Result<Self> {
        if window.boundary != Boundary::Closed {
            return Err(Error::InvalidInput("heights need a closed window".into()));
        }
        if heights.len() != window.len() + 1 {
            return Err(Error::InvalidInput(format!(
                "expected {} heights, got {}",
                window.len() + 1,
                heights.len()
            )));
        }
        if let Some(w) = heights.windows(2).find(|w| !(0..=1).contains(&(w[1] - w[0]))) {
            return Err(Error::InvalidInput(format!(
                "height increment {} outside {{0, 1}}",
                w[1] - w[0]
            )));
        }
        Ok(HeightConfig { window, heights })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn first_index(&self) -> i64 {
        -self.window.half_width - 1
    }

    pub fn last_index(&self) -> i64 {
        self.window.half_width
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    /// `z_i`; constant continuation outside `[−L−1, L]` (empty sites beyond the window).
    pub fn get(&self, i: i64) -> i64 {
        let k = (i - self.first_index()).clamp(0, self.heights.len() as i64 - 1);
        self.heights[k as usize]
    }

    fn slot(&self, i: i64) -> usize {
        (i - self.first_index()) as usize
    }

    /// Tries `z_i → z_i − 1`; returns whether it happened.
    pub fn try_lower(&mut self, i: i64) -> bool {
        if i <= self.first_index() || i >= self.last_index() {
            return false;
        }
        let k = self.slot(i);
        let h = self.heights[k] - 1;
        if h >= self.heights[k - 1] && self.heights[k + 1] - h <= 1 {
            self.heights[k] = h;
            true
        } else {
            false
        }
    }
}

/// Heights with `z_0 = 0`.
pub fn heights_from_occ(occ: &Occupancies) -> Result<HeightConfig> {
    let w = occ.window();
    let mut heights = Vec::with_capacity(w.len() + 1);
    let mut z = 0i64;
    heights.push(0);
    for s in w.sites() {
        z += occ.get(s) as i64;
        heights.push(z);
    }
    let z0 = heights[(w.half_width + 1) as usize];
    for h in &mut heights {
        *h -= z0;
    }
    HeightConfig::new(w, heights)
}

pub fn occ_from_heights(h: &HeightConfig) -> Occupancies {
    let w = h.window();
    let bits = w.sites().map(|s| h.get(s) - h.get(s - 1) == 1).collect();
    Occupancies::from_bits(w, bits).expect("one bit per site")
}

/// The height process `z` with its initial heights, so `J_i = z_i(0) − z_i(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightProcess {
    initial: HeightConfig,
    current: HeightConfig,
}

impl HeightProcess {
    pub fn new(initial: HeightConfig) -> Self {
        HeightProcess {
            current: initial.clone(),
            initial,
        }
    }

    pub fn heights(&self) -> &HeightConfig {
        &self.current
    }

    pub fn initial(&self) -> &HeightConfig {
        &self.initial
    }

    pub fn current_through(&self, i: i64) -> i64 {
        self.initial.get(i) - self.current.get(i)
    }
}

impl BondDriven for HeightProcess {
    fn on_epoch(&mut self, bond: i64, _time: f64) {
        self.current.try_lower(bond);
    }
}

/// Runs the height process to `horizon`.
pub fn evolve_heights(initial: HeightConfig, clocks: &BondClocks, horizon: f64) -> HeightProcess {
    let mut p = HeightProcess::new(initial);
    let mut q = ClockQueue::new(clocks, p.current.window().bonds());
    q.advance_to(horizon.max(0.0), |b, t| p.on_epoch(b, t));
    p
}
