//! Replicate summaries.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator); zero for a single value.
    pub sd: f64,
    /// Standard error of the mean; zero for a single value.
    pub stderr: f64,
}

impl SampleStats {
    pub fn from_values(values: &[f64]) -> Self {
        let count = values.len();
        if count == 0 {
            return SampleStats {
                count,
                mean: f64::NAN,
                sd: f64::NAN,
                stderr: f64::NAN,
            };
        }
        let mean = values.iter().sum::<f64>() / count as f64;
        let sd = if count > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
            (ss / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        SampleStats {
            count,
            mean,
            sd,
            stderr: sd / (count as f64).sqrt(),
        }
    }

    pub fn variance(&self) -> f64 {
        self.sd * self.sd
    }
}

/// Least-squares fit of `a + b·n^{-1/3}` to `(n, value)` pairs.
///
/// Returns `None` unless at least two distinct `n` are present.
pub fn fit_finite_size(points: &[(usize, f64)]) -> Option<(f64, f64)> {
    let xs: Vec<f64> = points.iter().map(|(n, _)| (*n as f64).powf(-1.0 / 3.0)).collect();
    let ys: Vec<f64> = points.iter().map(|(_, v)| *v).collect();
    let k = xs.len() as f64;
    if k < 2.0 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    Some((my - b * mx, b))
}
