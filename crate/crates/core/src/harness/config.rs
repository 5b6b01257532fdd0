use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{check_rate, Error, Result};
use crate::hydro::{MacroProfile, MacroRate, ProfileSpec};
use crate::lpp::{estimate_kappa, lambda0_from_kappa};

/// Where a `κ(r)` value comes from. Compare runs never assume one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum KappaSource {
    Supplied { value: f64, n: usize, stderr: f64 },
    Estimate { n: usize, replicas: usize, seed: u64 },
}

/// The `κ` actually used by a run, with its provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaUsed {
    pub r: f64,
    pub kappa: f64,
    pub stderr: f64,
    pub n: usize,
    pub replicas: usize,
    pub lambda0: f64,
    pub rho_star: f64,
}

impl KappaSource {
    fn validate(&self) -> Result<()> {
        match *self {
            KappaSource::Supplied { value, n, stderr } => {
                if !(value.is_finite() && value > 0.0) || n == 0 || stderr < 0.0 {
                    return Err(Error::param("kappa", "supplied value, n and stderr must be positive"));
                }
            }
            KappaSource::Estimate { n, replicas, .. } => {
                if n == 0 || replicas == 0 {
                    return Err(Error::param("kappa", "estimate needs n >= 1 and replicas >= 1"));
                }
            }
        }
        Ok(())
    }

    pub fn resolve(&self, r: f64) -> Result<KappaUsed> {
        let (kappa, stderr, n, replicas) = match *self {
            KappaSource::Supplied { value, n, stderr } => (value, stderr, n, 0),
            KappaSource::Estimate { n, replicas, seed } => {
                let e = estimate_kappa(r, n, replicas, seed)?;
                (e.mean, e.stderr, n, replicas)
            }
        };
        let rate = MacroRate::new(lambda0_from_kappa(kappa)?)?;
        Ok(KappaUsed {
            r,
            kappa,
            stderr,
            n,
            replicas,
            lambda0: rate.lambda0(),
            rho_star: rate.rho_star(),
        })
    }
}

/// `λ(0)` given directly, or through `κ(r)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateSource {
    Lambda0(f64),
    Kappa { r: f64, kappa: KappaSource },
}

impl RateSource {
    fn validate(&self) -> Result<()> {
        match self {
            RateSource::Lambda0(l) => MacroRate::new(*l).map(|_| ()),
            RateSource::Kappa { r, kappa } => {
                check_rate(*r)?;
                kappa.validate()
            }
        }
    }

    pub fn resolve(&self) -> Result<(MacroRate, Option<KappaUsed>)> {
        match self {
            RateSource::Lambda0(l) => Ok((MacroRate::new(*l)?, None)),
            RateSource::Kappa { r, kappa } => {
                let used = kappa.resolve(*r)?;
                Ok((MacroRate::new(used.lambda0)?, Some(used)))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaSweepConfig {
    pub rates: Vec<f64>,
    pub ladder: Vec<usize>,
    pub replicas: usize,
    pub seed: u64,
    /// Fit `a + b·n^{-1/3}` per rate when the ladder has two or more sizes.
    #[serde(default = "yes")]
    pub extrapolate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeConfig {
    pub points: Vec<(f64, f64)>,
    pub n: usize,
    pub replicas: usize,
    pub seed: u64,
    /// Relative tolerance against `(√x + √y)²`.
    #[serde(default = "default_shape_tolerance")]
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareConfig {
    pub r: f64,
    pub profile: ProfileSpec,
    pub n: usize,
    pub t: f64,
    /// Macroscopic windows `[a, b]` for density comparison.
    pub windows: Vec<(f64, f64)>,
    /// Macroscopic points `a` for current comparison.
    #[serde(default)]
    pub current_points: Vec<f64>,
    pub kappa: KappaSource,
    #[serde(default = "one")]
    pub replicas: usize,
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub density_tolerance: f64,
    #[serde(default = "default_tolerance")]
    pub current_tolerance: f64,
    /// Override for the window half-width; must not be below the default.
    #[serde(default)]
    pub half_width: Option<i64>,
    /// Repeat at twice the half-width and compare.
    #[serde(default)]
    pub two_l_check: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceCandidate {
    pub name: String,
    pub profile: ProfileSpec,
    pub expect_invariant: bool,
}

/// Microscopic run of the non-entropy shock at the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShockRunConfig {
    pub r: f64,
    pub n: usize,
    pub t: f64,
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceConfig {
    pub rate: RateSource,
    pub candidates: Vec<InvarianceCandidate>,
    pub times: Vec<f64>,
    #[serde(default)]
    pub shock_run: Option<ShockRunConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    pub bond: i64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCorrConfig {
    pub rho: f64,
    pub r: f64,
    /// Ring size; the ring has `2⌊sites/2⌋ + 1` sites.
    pub sites: usize,
    pub burn_in: f64,
    pub horizon: f64,
    pub seed: u64,
    /// Source of `ρ*` for the precondition check.
    #[serde(default)]
    pub kappa: Option<KappaSource>,
    #[serde(default)]
    pub checks: Vec<PairCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Experiment {
    KappaSweep(KappaSweepConfig),
    Shape(ShapeConfig),
    Compare(CompareConfig),
    Invariance(InvarianceConfig),
    Paircorr(PairCorrConfig),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub experiment: Experiment,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

fn yes() -> bool {
    true
}

fn one() -> usize {
    1
}

fn default_shape_tolerance() -> f64 {
    0.05
}

fn default_tolerance() -> f64 {
    0.03
}

fn default_samples() -> usize {
    10
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive, got {v}")))
    }
}

fn nonnegative(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be nonnegative, got {v}")))
    }
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::KappaSweep(_) => "kappa_sweep",
            Experiment::Shape(_) => "shape",
            Experiment::Compare(_) => "compare",
            Experiment::Invariance(_) => "invariance",
            Experiment::Paircorr(_) => "paircorr",
        }
    }

    /// Checks every parameter before anything runs.
    pub fn validate(&self) -> Result<()> {
        match self {
            Experiment::KappaSweep(c) => {
                if c.rates.is_empty() || c.ladder.is_empty() {
                    return Err(Error::param("rates", "need at least one rate and one size"));
                }
                c.rates.iter().try_for_each(|r| check_rate(*r))?;
                if c.ladder.contains(&0) || c.replicas == 0 {
                    return Err(Error::param("ladder", "sizes and replicas must be positive"));
                }
            }
            Experiment::Shape(c) => {
                if c.points.is_empty() || c.n == 0 || c.replicas == 0 {
                    return Err(Error::param("points", "need points, n >= 1 and replicas >= 1"));
                }
                for &(x, y) in &c.points {
                    positive("x", x)?;
                    positive("y", y)?;
                }
                positive("tolerance", c.tolerance)?;
            }
            Experiment::Compare(c) => {
                check_rate(c.r)?;
                MacroProfile::from_spec(&c.profile)?;
                nonnegative("t", c.t)?;
                if c.n == 0 || c.replicas == 0 {
                    return Err(Error::param("n", "n and replicas must be positive"));
                }
                if c.windows.is_empty() && c.current_points.is_empty() {
                    return Err(Error::param("windows", "nothing to compare"));
                }
                if let Some((a, b)) = c
                    .windows
                    .iter()
                    .find(|(a, b)| a.partial_cmp(b) != Some(std::cmp::Ordering::Less))
                {
                    return Err(Error::param("windows", format!("empty window [{a}, {b}]")));
                }
                c.kappa.validate()?;
                positive("density_tolerance", c.density_tolerance)?;
                positive("current_tolerance", c.current_tolerance)?;
            }
            Experiment::Invariance(c) => {
                c.rate.validate()?;
                if c.candidates.is_empty() || c.times.is_empty() {
                    return Err(Error::param("candidates", "need candidates and times"));
                }
                for cand in &c.candidates {
                    MacroProfile::from_spec(&cand.profile)?;
                }
                c.times.iter().try_for_each(|t| positive("times", *t))?;
                if let Some(s) = &c.shock_run {
                    check_rate(s.r)?;
                    positive("t", s.t)?;
                    if s.n == 0 || s.samples == 0 {
                        return Err(Error::param("shock_run", "n and samples must be positive"));
                    }
                }
            }
            Experiment::Paircorr(c) => {
                check_rate(c.r)?;
                if !(0.0..=1.0).contains(&c.rho) {
                    return Err(Error::param("rho", format!("must lie in [0, 1], got {}", c.rho)));
                }
                if c.sites < 3 {
                    return Err(Error::param("sites", "ring needs at least 3 sites"));
                }
                nonnegative("burn_in", c.burn_in)?;
                positive("horizon", c.horizon)?;
                if let Some(k) = &c.kappa {
                    k.validate()?;
                }
                let l = (c.sites / 2) as i64;
                if let Some(p) = c.checks.iter().find(|p| p.bond.abs() > l) {
                    return Err(Error::param("checks", format!("bond {} is not on the ring", p.bond)));
                }
            }
        }
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.experiment.validate()?;
        Ok(cfg)
    }
}
