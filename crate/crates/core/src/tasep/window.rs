use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// No jumps across the window edge.
    Closed,
    /// Site `L` feeds site `−L` through bond `L`.
    Periodic,
}

/// Sites `−L..=L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub half_width: i64,
    pub boundary: Boundary,
}

impl Window {
    pub fn new(half_width: i64, boundary: Boundary) -> Result<Self> {
        if half_width < 1 {
            return Err(Error::param(
                "half_width",
                format!("must be at least 1, got {half_width}"),
            ));
        }
        Ok(Window { half_width, boundary })
    }

    pub fn closed(half_width: i64) -> Result<Self> {
        Window::new(half_width, Boundary::Closed)
    }

    pub fn periodic(half_width: i64) -> Result<Self> {
        Window::new(half_width, Boundary::Periodic)
    }

    pub fn len(&self) -> usize {
        (2 * self.half_width + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, site: i64) -> bool {
        site.abs() <= self.half_width
    }

    pub fn sites(&self) -> std::ops::RangeInclusive<i64> {
        -self.half_width..=self.half_width
    }

    /// Bonds that can carry a particle. Bond `i` joins site `i` to site `i+1`.
    pub fn bonds(&self) -> std::ops::RangeInclusive<i64> {
        match self.boundary {
            Boundary::Closed => -self.half_width..=self.half_width - 1,
            Boundary::Periodic => -self.half_width..=self.half_width,
        }
    }

    /// Site to the right of bond `i`.
    pub fn target(&self, bond: i64) -> i64 {
        if bond == self.half_width {
            -self.half_width
        } else {
            bond + 1
        }
    }

    pub(crate) fn index(&self, site: i64) -> usize {
        (site + self.half_width) as usize
    }
}

/// Occupation numbers `η_i ∈ {0,1}` on a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occupancies {
    window: Window,
    bits: Vec<bool>,
}

impl Occupancies {
    pub fn empty(window: Window) -> Self {
        Occupancies {
            window,
            bits: vec![false; window.len()],
        }
    }

    pub fn from_bits(window: Window, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != window.len() {
            return Err(Error::InvalidInput(format!(
                "window has {} sites, got {} bits",
                window.len(),
                bits.len()
            )));
        }
        Ok(Occupancies { window, bits })
    }

    /// Occupied sites, listed by position.
    pub fn from_sites(window: Window, sites: &[i64]) -> Result<Self> {
        let mut occ = Occupancies::empty(window);
        for &s in sites {
            if !window.contains(s) {
                return Err(Error::InvalidInput(format!("site {s} outside the window")));
            }
            occ.set(s, true);
        }
        Ok(occ)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// `η_i`; zero outside the window.
    pub fn get(&self, site: i64) -> bool {
        self.window.contains(site) && self.bits[self.window.index(site)]
    }

    pub fn set(&mut self, site: i64, value: bool) {
        let k = self.window.index(site);
        self.bits[k] = value;
    }

    pub fn particle_count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn particles(&self) -> impl Iterator<Item = i64> + '_ {
        self.window.sites().filter(|&s| self.get(s))
    }
}
