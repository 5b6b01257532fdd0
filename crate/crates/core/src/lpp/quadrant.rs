use super::{effective_weight, Geometry, PassageTable};
use crate::error::{check_rate, Error, Result};
use crate::rng::{keyed, unit_exp, Domain};

/// Exponential samples on the `n × n` quadrant block with a slow diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadrantGrid {
    n: usize,
    r: f64,
    seed: Option<u64>,
    samples: Vec<f64>,
}

impl QuadrantGrid {
    /// Builds a grid from explicit samples, row-major with `i` the slow index:
    /// `samples[(i-1)*n + (j-1)] = Y_{i,j}`.
    pub fn from_samples(n: usize, r: f64, samples: Vec<f64>) -> Result<Self> {
        check_n(n)?;
        check_rate(r)?;
        if samples.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} samples for n = {n}, got {}",
                n * n,
                samples.len()
            )));
        }
        if let Some(bad) = samples.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "samples must be strictly positive and finite, found {bad}"
            )));
        }
        Ok(QuadrantGrid {
            n,
            r,
            seed: None,
            samples,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Same samples, different slow rate.
    pub fn with_rate(&self, r: f64) -> Result<Self> {
        check_rate(r)?;
        Ok(QuadrantGrid { r, ..self.clone() })
    }

    /// `Y_{i,j}`, 1-based.
    pub fn sample(&self, i: usize, j: usize) -> f64 {
        self.samples[(i - 1) * self.n + (j - 1)]
    }

    /// `w_{i,j} Y_{i,j}`, 1-based.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        effective_weight(self.sample(i, j), self.r, i == j)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::param("n", "grid size must be at least 1"))
    } else {
        Ok(())
    }
}

/// Fills a row of `cols` unit exponentials for row `row` (0-based) of replica `replica`.
fn fill_row(buf: &mut [f64], seed: u64, replica: u64, row: usize) {
    let mut rng = keyed(seed, Domain::Quadrant, replica, row as u64);
    for v in buf.iter_mut() {
        *v = unit_exp(&mut rng);
    }
}

/// Draws the grid for replica 0 of `seed`.
pub fn sample_quadrant(n: usize, r: f64, seed: u64) -> Result<QuadrantGrid> {
    check_n(n)?;
    check_rate(r)?;
    let mut samples = vec![0.0; n * n];
    for (row, chunk) in samples.chunks_mut(n).enumerate() {
        fill_row(chunk, seed, 0, row);
    }
    Ok(QuadrantGrid {
        n,
        r,
        seed: Some(seed),
        samples,
    })
}

/// Full passage table `T(i,j) = max(T(i−1,j), T(i,j−1)) + w_{i,j} Y_{i,j}`.
pub fn passage_time_quadrant(grid: &QuadrantGrid) -> PassageTable {
    let n = grid.n;
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let up = if i > 0 { values[(i - 1) * n + j] } else { 0.0 };
            let left = if j > 0 { values[i * n + j - 1] } else { 0.0 };
            let w = effective_weight(grid.samples[i * n + j], grid.r, i == j);
            values[i * n + j] = f64::max(up, left) + w;
        }
    }
    PassageTable {
        geometry: Geometry::Quadrant { n },
        width: n,
        values,
    }
}

/// Corner passage time `T_{rows,cols}` with a slow diagonal, drawn directly from
/// the keyed stream of `(seed, replica)` and kept in a single row buffer.
///
/// For `rows = cols = n` and `replica = 0` this reproduces
/// `passage_time_quadrant(&sample_quadrant(n, r, seed))` at `(n,n)` exactly.
pub fn corner_passage(rows: usize, cols: usize, r: f64, seed: u64, replica: u64) -> Result<f64> {
    check_n(rows)?;
    check_n(cols)?;
    check_rate(r)?;
    let mut acc = vec![0.0; cols];
    let mut noise = vec![0.0; cols];
    for i in 0..rows {
        fill_row(&mut noise, seed, replica, i);
        let mut left = 0.0;
        for j in 0..cols {
            let w = effective_weight(noise[j], r, i == j);
            // acc[j] still holds row i-1
            let v = f64::max(acc[j], left) + w;
            acc[j] = v;
            left = v;
        }
    }
    Ok(acc[cols - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpp::Site;

    #[test]
    fn single_cell_is_its_weight() {
        let g = sample_quadrant(1, 0.3, 11).unwrap();
        let t = passage_time_quadrant(&g);
        assert_eq!(t.get(Site::new(1, 1)), Some(g.sample(1, 1) / 0.3));
    }

    #[test]
    fn unit_two_by_two() {
        let g = QuadrantGrid::from_samples(2, 1.0, vec![1.0; 4]).unwrap();
        assert_eq!(passage_time_quadrant(&g).get(Site::new(2, 2)), Some(3.0));
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample_quadrant(3, 0.5, 9).unwrap(), sample_quadrant(3, 0.5, 9).unwrap());
        assert_ne!(
            sample_quadrant(3, 0.5, 9).unwrap().samples(),
            sample_quadrant(3, 0.5, 10).unwrap().samples()
        );
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(sample_quadrant(0, 0.5, 1).is_err());
        assert!(sample_quadrant(2, 0.0, 1).is_err());
        assert!(sample_quadrant(2, 1.5, 1).is_err());
        assert!(QuadrantGrid::from_samples(1, 1.0, vec![0.0]).is_err());
        assert!(QuadrantGrid::from_samples(1, 1.0, vec![f64::INFINITY]).is_err());
        assert!(QuadrantGrid::from_samples(2, 1.0, vec![1.0; 3]).is_err());
    }

    #[test]
    fn sample_mean_near_one() {
        let g = sample_quadrant(1000, 0.5, 3).unwrap();
        let mean = g.samples().iter().sum::<f64>() / 1e6;
        assert!((mean - 1.0).abs() < 0.1, "mean {mean}");
        // 1e6 unit exponentials: sd of the mean is 1e-3
        assert!((mean - 1.0).abs() < 5e-3, "mean {mean}");
    }

    #[test]
    fn streaming_matches_table() {
        for &(n, r, seed) in &[(1, 0.7, 1), (7, 0.4, 2), (40, 1.0, 3)] {
            let full = passage_time_quadrant(&sample_quadrant(n, r, seed).unwrap());
            let corner = full.get(Site::new(n as i64, n as i64)).unwrap();
            assert_eq!(corner_passage(n, n, r, seed, 0).unwrap(), corner);
        }
    }

    #[test]
    fn table_is_monotone_in_each_coordinate() {
        let t = passage_time_quadrant(&sample_quadrant(30, 0.3, 5).unwrap());
        for i in 1..=30 {
            for j in 1..=30 {
                let v = t.get(Site::new(i, j)).unwrap();
                if i < 30 {
                    assert!(t.get(Site::new(i + 1, j)).unwrap() >= v);
                }
                if j < 30 {
                    assert!(t.get(Site::new(i, j + 1)).unwrap() >= v);
                }
            }
        }
    }
}
