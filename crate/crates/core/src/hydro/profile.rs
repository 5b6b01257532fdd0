use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Piecewise-constant density `ρ₀` and its antiderivative `v₀` with `v₀(0) = 0`.
///
/// `densities[0]` applies on `(−∞, x₀)`, `densities[k+1]` on `[x_k, x_{k+1})`
/// and the last entry on `[x_last, ∞)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MacroProfile {
    breaks: Vec<f64>,
    densities: Vec<f64>,
    /// `v₀` at each breakpoint.
    values: Vec<f64>,
}

/// JSON form: a left tail density, then segments that each start at `x` and
/// run to the next segment's start. The last segment's density is the right tail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub left_tail: f64,
    #[serde(default)]
    pub segments: Vec<SegmentSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub x: f64,
    pub density: f64,
}

impl MacroProfile {
    pub fn new(breaks: Vec<f64>, densities: Vec<f64>) -> Result<Self> {
        if densities.len() != breaks.len() + 1 {
            return Err(Error::InvalidInput(format!(
                "{} breakpoints need {} densities, got {}",
                breaks.len(),
                breaks.len() + 1,
                densities.len()
            )));
        }
        if let Some(d) = densities.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(Error::InvalidInput(format!("density {d} outside [0, 1]")));
        }
        if breaks.iter().any(|x| !x.is_finite()) || breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "breakpoints must be finite and strictly increasing".into(),
            ));
        }
        let mut values = Vec::with_capacity(breaks.len());
        let mut acc = 0.0;
        for (k, &x) in breaks.iter().enumerate() {
            if k > 0 {
                acc += densities[k] * (x - breaks[k - 1]);
            }
            values.push(acc);
        }
        let mut profile = MacroProfile {
            breaks,
            densities,
            values,
        };
        let offset = profile.v0(0.0);
        for v in &mut profile.values {
            *v -= offset;
        }
        Ok(profile)
    }

    pub fn constant(rho: f64) -> Result<Self> {
        MacroProfile::new(vec![], vec![rho])
    }

    /// `left` on `(−∞, at)`, `right` on `[at, ∞)`.
    pub fn step(left: f64, at: f64, right: f64) -> Result<Self> {
        MacroProfile::new(vec![at], vec![left, right])
    }

    /// Piecewise-linear interpolant of sampled values of an antiderivative.
    ///
    /// Returns the profile (renormalized to `v₀(0) = 0`) and the offset that was
    /// subtracted, so that `original(x) = profile.v0(x) + offset` on the mesh.
    pub fn from_samples(xs: &[f64], vs: &[f64], left_tail: f64, right_tail: f64) -> Result<(Self, f64)> {
        if xs.len() != vs.len() || xs.len() < 2 {
            return Err(Error::InvalidInput("need at least two matching samples".into()));
        }
        let mut densities = vec![left_tail];
        for k in 1..xs.len() {
            let slope = (vs[k] - vs[k - 1]) / (xs[k] - xs[k - 1]);
            densities.push(slope.clamp(0.0, 1.0));
        }
        densities.push(right_tail);
        let profile = MacroProfile::new(xs.to_vec(), densities)?;
        // recover the offset at the first sample, which the interpolant passes through
        let offset = vs[0] - profile.v0(xs[0]);
        Ok((profile, offset))
    }

    pub fn from_spec(spec: &ProfileSpec) -> Result<Self> {
        let breaks = spec.segments.iter().map(|s| s.x).collect();
        let densities = std::iter::once(spec.left_tail)
            .chain(spec.segments.iter().map(|s| s.density))
            .collect();
        MacroProfile::new(breaks, densities)
    }

    pub fn to_spec(&self) -> ProfileSpec {
        ProfileSpec {
            left_tail: self.densities[0],
            segments: self
                .breaks
                .iter()
                .zip(&self.densities[1..])
                .map(|(&x, &density)| SegmentSpec { x, density })
                .collect(),
        }
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    /// Density on the piece containing `x` (right-continuous).
    pub fn density_at(&self, x: f64) -> f64 {
        let k = self.breaks.partition_point(|&b| b <= x);
        self.densities[k]
    }

    /// `v₀(x)`.
    pub fn v0(&self, x: f64) -> f64 {
        if self.breaks.is_empty() {
            return self.densities[0] * x;
        }
        let k = self.breaks.partition_point(|&b| b <= x);
        if k == 0 {
            self.values[0] - self.densities[0] * (self.breaks[0] - x)
        } else {
            self.values[k - 1] + self.densities[k] * (x - self.breaks[k - 1])
        }
    }

    pub fn min_density(&self) -> f64 {
        self.densities.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_density(&self) -> f64 {
        self.densities.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antiderivative_of_a_step() {
        let p = MacroProfile::step(0.8, 0.5, 0.2).unwrap();
        assert_eq!(p.v0(0.0), 0.0);
        assert!((p.v0(-1.0) + 0.8).abs() < 1e-15);
        assert!((p.v0(1.0) - (0.4 + 0.1)).abs() < 1e-15);
        assert_eq!(p.density_at(0.49), 0.8);
        assert_eq!(p.density_at(0.5), 0.2);
    }

    #[test]
    fn constant_profile() {
        let p = MacroProfile::constant(0.3).unwrap();
        assert!((p.v0(2.0) - 0.6).abs() < 1e-15);
        assert_eq!(p.v0(0.0), 0.0);
    }

    #[test]
    fn spec_round_trip_and_validation() {
        let p = MacroProfile::new(vec![-1.0, 0.0, 2.0], vec![0.1, 0.9, 0.2, 0.5]).unwrap();
        assert_eq!(MacroProfile::from_spec(&p.to_spec()).unwrap(), p);
        assert!(MacroProfile::new(vec![1.0, 0.0], vec![0.1, 0.2, 0.3]).is_err());
        assert!(MacroProfile::new(vec![0.0], vec![0.1, 1.2]).is_err());
        assert!(MacroProfile::new(vec![0.0], vec![0.1]).is_err());
    }

    #[test]
    fn interpolant_reproduces_samples() {
        let xs = [-1.0, -0.2, 0.3, 1.0];
        let vs = [5.0, 5.4, 5.9, 6.0];
        let (p, off) = MacroProfile::from_samples(&xs, &vs, 0.5, 0.1).unwrap();
        for (x, v) in xs.iter().zip(vs) {
            assert!((p.v0(*x) + off - v).abs() < 1e-14);
        }
        assert!(p.v0(0.0).abs() < 1e-15);
    }
}
