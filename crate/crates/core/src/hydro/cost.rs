use serde::{Deserialize, Serialize};

use super::{g0, MacroRate};
use crate::error::{Error, Result};

/// Region of `(x, q)` for the minimal control cost over time `t`.
///
/// With `B = √(1−λ(0))`:
///
/// | case             | `x`             | `q`                                              |
/// |------------------|-----------------|--------------------------------------------------|
/// | `Distant`        | `|x| ≥ Bt`      | any                                              |
/// | `RightDirect`    | `0 ≤ x < Bt`    | `q ≤ x − Bt` or `q ≥ (√(Bt) − √x)²`              |
/// | `LeftDirect`     | `−Bt < x ≤ 0`   | `q ≤ −(√(Bt) − √|x|)²` or `q ≥ x + Bt`           |
/// | `RightViaDefect` | `0 ≤ x < Bt`    | `x − Bt < q < (√(Bt) − √x)²`                     |
/// | `LeftViaDefect`  | `−Bt < x ≤ 0`   | `−(√(Bt) − √|x|)² < q < x + Bt`                  |
///
/// The first three use the straight path, the last two wait at the defect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CostCase {
    Distant,
    RightDirect,
    LeftDirect,
    RightViaDefect,
    LeftViaDefect,
}

impl CostCase {
    pub fn via_defect(self) -> bool {
        matches!(self, CostCase::RightViaDefect | CostCase::LeftViaDefect)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("time must be positive, got {t}")))
    }
}

pub fn classify(x: f64, t: f64, q: f64, rate: &MacroRate) -> Result<CostCase> {
    check_time(t)?;
    // λ(0) = 1: the defect cases are empty and B = 0 must not reach s₁ = |q|/B
    if rate.is_homogeneous() {
        return Ok(CostCase::Distant);
    }
    let bt = rate.b() * t;
    if x.abs() >= bt {
        return Ok(CostCase::Distant);
    }
    let reach = (bt.sqrt() - x.abs().sqrt()).powi(2);
    Ok(if x >= 0.0 {
        if q <= x - bt || q >= reach {
            CostCase::RightDirect
        } else {
            CostCase::RightViaDefect
        }
    } else if q <= -reach || q >= x + bt {
        CostCase::LeftDirect
    } else {
        CostCase::LeftViaDefect
    })
}

/// Minimal cost `I(x,t,q)` of moving from `q` to `x` in time `t` with running
/// cost `λ(w) g₀(w'/λ(w))`.
pub fn control_cost(x: f64, t: f64, q: f64, rate: &MacroRate) -> Result<f64> {
    let case = classify(x, t, q, rate)?;
    Ok(cost_in_case(case, x, t, q, rate))
}

pub(crate) fn cost_in_case(case: CostCase, x: f64, t: f64, q: f64, rate: &MacroRate) -> f64 {
    if case.via_defect() {
        0.5 * rate.b() * (x.abs() + q.abs()) - 0.5 * (x - q) + 0.25 * t * rate.lambda0()
    } else {
        t * g0((x - q) / t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PathKind {
    /// `w(s) = q + (s/t)(x − q)`.
    Straight,
    /// Straight to 0 at speed `B`, rest at 0 on `[s₁, s₂]`, straight to `x` at speed `B`.
    ThreeSegment { s1: f64, s2: f64 },
}

/// Optimal path for `I(x,t,q)` and its cost, integrated segment by segment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathDescription {
    pub kind: PathKind,
    pub q: f64,
    pub x: f64,
    pub t: f64,
    pub value: f64,
}

impl PathDescription {
    /// `w(s)` for `s ∈ [0, t]`.
    pub fn position(&self, s: f64) -> f64 {
        match self.kind {
            PathKind::Straight => self.q + (s / self.t) * (self.x - self.q),
            PathKind::ThreeSegment { s1, s2 } => {
                if s < s1 {
                    self.q - s * self.q / s1
                } else if s < s2 || s2 >= self.t {
                    0.0
                } else {
                    (s - s2) * self.x / (self.t - s2)
                }
            }
        }
    }
}

pub fn optimal_path(x: f64, t: f64, q: f64, rate: &MacroRate) -> Result<PathDescription> {
    let case = classify(x, t, q, rate)?;
    let (kind, value) = if case.via_defect() {
        let b = rate.b();
        let s1 = q.abs() / b;
        let s2 = t - x.abs() / b;
        let approach = if s1 > 0.0 { s1 * g0(-q / s1) } else { 0.0 };
        let wait = (s2 - s1) * rate.lambda0() * g0(0.0);
        let depart = if t - s2 > 0.0 { (t - s2) * g0(x / (t - s2)) } else { 0.0 };
        (PathKind::ThreeSegment { s1, s2 }, approach + wait + depart)
    } else {
        (PathKind::Straight, t * g0((x - q) / t))
    };
    Ok(PathDescription { kind, q, x, t, value })
}
