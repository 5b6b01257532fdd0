use super::{effective_weight, in_wedge, Geometry, PassageTable, QuadrantGrid, Site};
use crate::error::{check_rate, Error, Result};
use crate::lpp::passage_time_quadrant;
use crate::rng::{keyed, unit_exp, Domain};

/// Exponential samples on a wedge trapezoid with a slow column `i = m`.
///
/// Row `j ∈ 1..=j_max` holds the sites `i ∈ [−j+1, i_max + j_max − j]`, stored
/// at offset `a = i + j − 1`. The offset is the first coordinate of the shear
/// `(i,j) ↦ (i+j, j)` minus one, so every row has the same width
/// `i_max + j_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct WedgeGrid {
    i_max: i64,
    j_max: i64,
    m: i64,
    r: f64,
    seed: Option<u64>,
    samples: Vec<f64>,
}

impl WedgeGrid {
    pub fn from_samples(i_max: i64, j_max: i64, m: i64, r: f64, samples: Vec<f64>) -> Result<Self> {
        let width = check_extent(i_max, j_max)?;
        check_rate(r)?;
        if samples.len() != width * j_max as usize {
            return Err(Error::InvalidInput(format!(
                "expected {} wedge samples, got {}",
                width * j_max as usize,
                samples.len()
            )));
        }
        if let Some(bad) = samples.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "samples must be strictly positive and finite, found {bad}"
            )));
        }
        Ok(WedgeGrid {
            i_max,
            j_max,
            m,
            r,
            seed: None,
            samples,
        })
    }

    pub fn i_max(&self) -> i64 {
        self.i_max
    }

    pub fn j_max(&self) -> i64 {
        self.j_max
    }

    pub fn defect_column(&self) -> i64 {
        self.m
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn width(&self) -> usize {
        (self.i_max + self.j_max) as usize
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn contains(&self, site: Site) -> bool {
        let a = site.i + site.j - 1;
        in_wedge(site) && site.j <= self.j_max && a < self.width() as i64
    }

    /// `τ_u` for a site inside the trapezoid.
    pub fn sample(&self, site: Site) -> Option<f64> {
        self.contains(site).then(|| {
            let a = (site.i + site.j - 1) as usize;
            self.samples[(site.j as usize - 1) * self.width() + a]
        })
    }

    /// `ω^m_u τ_u` for a site inside the trapezoid.
    pub fn weight(&self, site: Site) -> Option<f64> {
        self.sample(site).map(|s| effective_weight(s, self.r, site.i == self.m))
    }
}

fn check_extent(i_max: i64, j_max: i64) -> Result<usize> {
    if j_max < 1 {
        return Err(Error::param("j_max", "wedge needs at least one row"));
    }
    if i_max < -j_max + 1 {
        return Err(Error::param(
            "i_max",
            format!("top row has no sites: i_max = {i_max} < {}", -j_max + 1),
        ));
    }
    Ok((i_max + j_max) as usize)
}

/// Draws a wedge grid: row `j` comes from stream `j − 1` of `seed`.
pub fn sample_wedge(i_max: i64, j_max: i64, m: i64, r: f64, seed: u64) -> Result<WedgeGrid> {
    let width = check_extent(i_max, j_max)?;
    check_rate(r)?;
    let mut samples = vec![0.0; width * j_max as usize];
    for (row, chunk) in samples.chunks_mut(width).enumerate() {
        let mut rng = keyed(seed, Domain::Wedge, 0, row as u64);
        for v in chunk.iter_mut() {
            *v = unit_exp(&mut rng);
        }
    }
    Ok(WedgeGrid {
        i_max,
        j_max,
        m,
        r,
        seed: Some(seed),
        samples,
    })
}

/// Wedge passage times with the full step set `(1,0)`, `(0,1)`, `(−1,1)`.
///
/// Rows are filled in increasing `j`, each row left to right: `(i−1,j)` lies
/// to the left in the same row, `(i,j−1)` and `(i+1,j−1)` in the previous row.
/// Boundary sites contribute 0.
pub fn passage_time_wedge(grid: &WedgeGrid) -> PassageTable {
    fill_wedge(grid, true)
}

fn fill_wedge(grid: &WedgeGrid, vertical_steps: bool) -> PassageTable {
    let w = grid.width();
    let rows = grid.j_max as usize;
    let mut values: Vec<f64> = vec![0.0; w * rows];
    for row in 0..rows {
        let j = row as i64 + 1;
        for a in 0..w {
            let i = a as i64 - j + 1;
            // offsets: (i-1,j) -> (row, a-1); (i,j-1) -> (row-1, a-1); (i+1,j-1) -> (row-1, a)
            let left = if a > 0 { values[row * w + a - 1] } else { 0.0 };
            let (below, diag) = if row > 0 {
                let below = if a > 0 { values[(row - 1) * w + a - 1] } else { 0.0 };
                (below, values[(row - 1) * w + a])
            } else {
                (0.0, 0.0)
            };
            let best = if vertical_steps {
                left.max(below).max(diag)
            } else {
                left.max(diag)
            };
            let weight = effective_weight(grid.samples[row * w + a], grid.r, i == grid.m);
            values[row * w + a] = best + weight;
        }
    }
    PassageTable {
        geometry: Geometry::Wedge {
            i_max: grid.i_max,
            j_max: grid.j_max,
        },
        width: w,
        values,
    }
}

/// Passage time to `(0, j_max)` using only the steps `(1,0)` and `(−1,1)`.
///
/// Replacing a `(0,1)` step by `(1,0)` followed by `(−1,1)` adds one positive
/// weight, so on exact arithmetic this equals the full-step value.
pub fn wedge_restricted_corner(grid: &WedgeGrid) -> Result<f64> {
    if grid.i_max != 0 {
        return Err(Error::InvalidInput(
            "restricted corner value needs a wedge with i_max = 0".into(),
        ));
    }
    let table = fill_wedge(grid, false);
    Ok(table.get(Site::new(0, grid.j_max)).expect("corner inside trapezoid"))
}

/// Evaluates the same exponential sample set two ways: as the wedge passage
/// time `T^0(0,n)` without `(0,1)` steps, and as the quadrant time `T_{n,n}` of
/// the sheared weights `Y_{i,j} = τ(i−j, j)`.
///
/// The recursions are images of each other under the shear, so the two values
/// agree bit for bit.
pub fn wedge_quadrant_equivalence(n: usize, r: f64, seed: u64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::param("n", "size must be at least 1"));
    }
    let wedge = sample_wedge(0, n as i64, 0, r, seed)?;
    let wedge_value = wedge_restricted_corner(&wedge)?;

    // wedge storage is (row j, offset a) = quadrant (b-1, a-1); quadrant wants (a-1, b-1)
    let mut quad = vec![0.0; n * n];
    for b in 0..n {
        for a in 0..n {
            quad[a * n + b] = wedge.samples[b * n + a];
        }
    }
    let grid = QuadrantGrid::from_samples(n, r, quad)?;
    let quad_value = passage_time_quadrant(&grid)
        .get(Site::new(n as i64, n as i64))
        .expect("corner inside table");
    Ok((wedge_value, quad_value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_is_zero() {
        let g = sample_wedge(3, 3, 0, 0.5, 1).unwrap();
        let t = passage_time_wedge(&g);
        for i in 0..4 {
            assert_eq!(t.get(Site::new(i, 0)), Some(0.0));
        }
        assert_eq!(t.get(Site::new(-2, 2)), Some(0.0));
        assert_eq!(t.get(Site::new(0, 1)), g.weight(Site::new(0, 1)));
    }

    #[test]
    fn single_site_equivalence() {
        let (w, q) = wedge_quadrant_equivalence(1, 0.3, 4).unwrap();
        let g = sample_wedge(0, 1, 0, 0.3, 4).unwrap();
        assert_eq!(w, q);
        assert_eq!(w, g.sample(Site::new(0, 1)).unwrap() / 0.3);
    }

    #[test]
    fn trapezoid_membership() {
        let g = sample_wedge(2, 3, 0, 1.0, 1).unwrap();
        assert_eq!(g.width(), 5);
        assert!(g.contains(Site::new(-2, 3)));
        assert!(!g.contains(Site::new(-3, 3)));
        assert!(g.contains(Site::new(2, 3)));
        assert!(g.contains(Site::new(4, 1)));
        assert!(!g.contains(Site::new(5, 1)));
        assert!(!g.contains(Site::new(0, 4)));
    }

    #[test]
    fn restricted_matches_full_steps_closely() {
        for seed in 0..20 {
            let g = sample_wedge(0, 12, 0, 0.4, seed).unwrap();
            let full = passage_time_wedge(&g).get(Site::new(0, 12)).unwrap();
            let restricted = wedge_restricted_corner(&g).unwrap();
            assert!((full - restricted).abs() <= 1e-12 * full, "{full} vs {restricted}");
        }
    }

    #[test]
    fn rejects_empty_extent() {
        assert!(sample_wedge(0, 0, 0, 1.0, 1).is_err());
        assert!(sample_wedge(-3, 2, 0, 1.0, 1).is_err());
        assert!(sample_wedge(1, 2, 0, 0.0, 1).is_err());
    }
}
