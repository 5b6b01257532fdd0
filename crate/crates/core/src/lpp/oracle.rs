//! Exhaustive path enumeration, used only as a test oracle for the recursions.

use super::{in_wedge, wedge_boundary, QuadrantGrid, Site, WedgeGrid};
use crate::error::{Error, Result};

pub const DEFAULT_PATH_CAP: u128 = 1_000_000;

#[derive(Clone, Copy, Debug)]
pub enum GridRef<'a> {
    Quadrant(&'a QuadrantGrid),
    Wedge(&'a WedgeGrid),
}

impl<'a> From<&'a QuadrantGrid> for GridRef<'a> {
    fn from(g: &'a QuadrantGrid) -> Self {
        GridRef::Quadrant(g)
    }
}

impl<'a> From<&'a WedgeGrid> for GridRef<'a> {
    fn from(g: &'a WedgeGrid) -> Self {
        GridRef::Wedge(g)
    }
}

pub fn brute_force_passage<'a>(grid: impl Into<GridRef<'a>>, target: Site) -> Result<f64> {
    brute_force_passage_with_cap(grid, target, DEFAULT_PATH_CAP)
}

/// Maximum weighted sum over every admissible path to `target`, summed in path
/// order. Refuses when the number of paths exceeds `cap`.
pub fn brute_force_passage_with_cap<'a>(grid: impl Into<GridRef<'a>>, target: Site, cap: u128) -> Result<f64> {
    match grid.into() {
        GridRef::Quadrant(g) => quadrant(g, target, cap),
        GridRef::Wedge(g) => wedge(g, target, cap),
    }
}

fn quadrant(g: &QuadrantGrid, target: Site, cap: u128) -> Result<f64> {
    let n = g.n() as i64;
    if target.i < 1 || target.j < 1 || target.i > n || target.j > n {
        return Err(Error::InvalidInput(format!("target {target:?} outside {n}x{n} grid")));
    }
    let (a, b) = ((target.i - 1) as u128, (target.j - 1) as u128);
    let count = binomial(a + b, a.min(b));
    if count > cap {
        return Err(Error::PathCap { count, cap });
    }

    fn walk(g: &QuadrantGrid, i: i64, j: i64, t: Site, acc: f64, best: &mut f64) {
        let acc = acc + g.weight(i as usize, j as usize);
        if i == t.i && j == t.j {
            *best = best.max(acc);
            return;
        }
        if i < t.i {
            walk(g, i + 1, j, t, acc, best);
        }
        if j < t.j {
            walk(g, i, j + 1, t, acc, best);
        }
    }
    let mut best = f64::NEG_INFINITY;
    walk(g, 1, 1, target, 0.0, &mut best);
    Ok(best)
}

fn wedge(g: &WedgeGrid, target: Site, cap: u128) -> Result<f64> {
    if wedge_boundary(target) {
        return Ok(0.0);
    }
    if !in_wedge(target) || !g.contains(target) {
        return Err(Error::InvalidInput(format!("target {target:?} outside wedge grid")));
    }
    let count = wedge_path_count(target);
    if count > cap {
        return Err(Error::PathCap { count, cap });
    }

    let diag = target.i + target.j;
    fn walk(g: &WedgeGrid, u: Site, t: Site, diag: i64, acc: f64, best: &mut f64) {
        let acc = acc + g.weight(u).expect("path stays inside trapezoid");
        if u == t {
            *best = best.max(acc);
            return;
        }
        let steps = [(1, 0), (0, 1), (-1, 1)];
        for (di, dj) in steps {
            let v = Site::new(u.i + di, u.j + dj);
            // target reachable iff j never overshoots and i+j never overshoots
            if v.j <= t.j && v.i + v.j <= diag {
                walk(g, v, t, diag, acc, best);
            }
        }
    }
    let mut best = f64::NEG_INFINITY;
    walk(g, Site::new(0, 1), target, diag, 0.0, &mut best);
    Ok(best)
}

/// Number of admissible wedge paths from `(0,1)` to `target`.
fn wedge_path_count(target: Site) -> u128 {
    let width = (target.i + target.j) as usize;
    let rows = target.j as usize;
    let mut count = vec![0u128; width * rows];
    for row in 0..rows {
        for a in 0..width {
            let c = if row == 0 && a == 0 {
                1
            } else {
                let left = if a > 0 { count[row * width + a - 1] } else { 0 };
                let (below, diag) = if row > 0 {
                    let below = if a > 0 { count[(row - 1) * width + a - 1] } else { 0 };
                    (below, count[(row - 1) * width + a])
                } else {
                    (0, 0)
                };
                left.saturating_add(below).saturating_add(diag)
            };
            count[row * width + a] = c;
        }
    }
    count[(rows - 1) * width + (target.i + target.j - 1) as usize]
}

fn binomial(n: u128, k: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}
