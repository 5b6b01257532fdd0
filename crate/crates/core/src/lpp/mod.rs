//! Last-passage percolation with a line defect.
//!
//! Two geometries are supported. The quadrant `ℕ²` with up/right paths from
//! `(1,1)` and a slow diagonal `i = j`, and the wedge lattice
//! `𝕃 = {(i,j) : j ≥ 1, i ≥ −j+1}` with steps `(1,0)`, `(0,1)`, `(−1,1)` from
//! `(0,1)` and a slow column `i = m`. Defect sites carry weight `1/r`.
//!
//! Coordinates at the API follow the usual 1-based lattice conventions
//! (`(1,1)` is the quadrant origin, `(0,1)` the wedge origin); storage is
//! 0-based and row-major. Only passage values are computed, never maximizing
//! paths, so ties in the max recursion need no tie-breaking rule.

mod kappa;
mod oracle;
mod quadrant;
mod wedge;

pub use kappa::{
    estimate_kappa, kappa_bounds, lambda0_from_kappa, lambda0_from_kappa_with_tolerance, shape_probe,
    shape_probe_replicas, KappaBounds, KappaEstimate, KAPPA_FLOOR_TOLERANCE,
};
pub use oracle::{brute_force_passage, brute_force_passage_with_cap, GridRef, DEFAULT_PATH_CAP};
pub use quadrant::{corner_passage, passage_time_quadrant, sample_quadrant, QuadrantGrid};
pub use wedge::{passage_time_wedge, sample_wedge, wedge_quadrant_equivalence, wedge_restricted_corner, WedgeGrid};

use serde::{Deserialize, Serialize};

/// A lattice site in API coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Site {
    pub i: i64,
    pub j: i64,
}

impl Site {
    pub const fn new(i: i64, j: i64) -> Self {
        Site { i, j }
    }
}

/// Weight of a site: the raw sample, divided by `r` on the defect line.
#[inline]
pub(crate) fn effective_weight(sample: f64, r: f64, on_defect: bool) -> f64 {
    if on_defect {
        sample / r
    } else {
        sample
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Geometry {
    /// `n × n` block of the quadrant.
    Quadrant { n: usize },
    /// Trapezoid of the wedge: rows `1..=j_max`, row `j` spanning
    /// `i ∈ [−j+1, i_max + j_max − j]`. This is the smallest region closed
    /// under the recursion that contains every target with `i ≤ i_max`.
    Wedge { i_max: i64, j_max: i64 },
}

/// Passage times over a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PassageTable {
    geometry: Geometry,
    width: usize,
    values: Vec<f64>,
}

impl PassageTable {
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Passage time at `site`, or `None` when the site is outside the table.
    ///
    /// Wedge boundary sites `∂𝕃` report `Some(0.0)`.
    pub fn get(&self, site: Site) -> Option<f64> {
        match self.geometry {
            Geometry::Quadrant { n } => {
                let (i, j) = (site.i, site.j);
                if i < 1 || j < 1 || i > n as i64 || j > n as i64 {
                    return None;
                }
                Some(self.values[(i as usize - 1) * self.width + (j as usize - 1)])
            }
            Geometry::Wedge { j_max, .. } => {
                if wedge_boundary(site) {
                    return Some(0.0);
                }
                let (i, j) = (site.i, site.j);
                let a = i + j - 1;
                if j < 1 || j > j_max || a < 0 || a >= self.width as i64 {
                    return None;
                }
                Some(self.values[(j as usize - 1) * self.width + a as usize])
            }
        }
    }

    /// Raw row-major storage.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Membership in `∂𝕃 = {(i,0) : i ≥ 0} ∪ {(i,−i) : i < 0}`.
pub fn wedge_boundary(site: Site) -> bool {
    (site.j == 0 && site.i >= 0) || (site.i < 0 && site.j == -site.i)
}

/// Membership in the wedge interior `𝕃`.
pub fn in_wedge(site: Site) -> bool {
    site.j >= 1 && site.i > -site.j
}
