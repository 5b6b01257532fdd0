use serde::{Deserialize, Serialize};

use super::value::value_function;
use super::{uniform_mesh, MacroProfile, MacroRate};
use crate::error::{Error, Result};

pub const INVARIANCE_TOLERANCE: f64 = 1e-6;
const BAND_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JumpKind {
    /// `ρ* → 1−ρ*`, permitted anywhere.
    Entropy,
    /// `1−ρ* → ρ*`, permitted only at the origin.
    NonEntropy,
    /// Any other discontinuity; never invariant.
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileJump {
    pub x: f64,
    pub left: f64,
    pub right: f64,
    pub kind: JumpKind,
    pub allowed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeCheck {
    pub t: f64,
    pub max_deviation: f64,
    pub worst_x: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub lambda0: f64,
    pub rho_star: f64,
    pub tolerance: f64,
    pub times: Vec<TimeCheck>,
    /// True when every time passes.
    pub invariant: bool,
    pub first_failure: Option<f64>,
    pub jumps: Vec<ProfileJump>,
    /// Every piece sits at `ρ*` or `1−ρ*` and every jump is allowed.
    pub admissible: bool,
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= BAND_SLACK
}

fn classify_jumps(profile: &MacroProfile, s: f64) -> Vec<ProfileJump> {
    let d = profile.densities();
    profile
        .breaks()
        .iter()
        .enumerate()
        .filter(|(k, _)| d[*k] != d[k + 1])
        .map(|(k, &x)| {
            let (left, right) = (d[k], d[k + 1]);
            let kind = if near(left, s) && near(right, 1.0 - s) {
                JumpKind::Entropy
            } else if near(left, 1.0 - s) && near(right, s) {
                JumpKind::NonEntropy
            } else {
                JumpKind::Other
            };
            let allowed = match kind {
                JumpKind::Entropy => true,
                JumpKind::NonEntropy => x == 0.0,
                JumpKind::Other => false,
            };
            ProfileJump {
                x,
                left,
                right,
                kind,
                allowed,
            }
        })
        .collect()
}

/// Mesh covering every breakpoint and the region each can influence by time `t_max`.
fn default_mesh(profile: &MacroProfile, t_max: f64) -> Result<Vec<f64>> {
    let b = profile.breaks();
    let lo = b.first().copied().unwrap_or(0.0).min(0.0) - 2.0 * t_max - 1.0;
    let hi = b.last().copied().unwrap_or(0.0).max(0.0) + 2.0 * t_max + 1.0;
    let mut mesh = uniform_mesh(lo, hi, 801)?;
    for &x in b.iter().chain(std::iter::once(&0.0)) {
        mesh.extend([x - 1e-3, x, x + 1e-3]);
    }
    mesh.sort_by(f64::total_cmp);
    mesh.dedup();
    Ok(mesh)
}

/// Compares `v(x,t)` with `v₀(x) − tλ(0)/4` on a default mesh.
pub fn invariance_check(profile: &MacroProfile, rate: &MacroRate, t_list: &[f64]) -> Result<InvarianceReport> {
    let t_max = t_list.iter().copied().fold(0.0, f64::max);
    let mesh = default_mesh(profile, t_max)?;
    invariance_check_on(profile, rate, t_list, &mesh)
}

pub fn invariance_check_on(
    profile: &MacroProfile,
    rate: &MacroRate,
    t_list: &[f64],
    mesh: &[f64],
) -> Result<InvarianceReport> {
    let s = rate.rho_star();
    if profile.min_density() < s - BAND_SLACK || profile.max_density() > 1.0 - s + BAND_SLACK {
        return Err(Error::Domain(format!(
            "profile densities must lie in [{s}, {}]",
            1.0 - s
        )));
    }
    if t_list.is_empty() {
        return Err(Error::InvalidInput("no times to check".into()));
    }
    let mut times = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let sol = value_function(profile, t, rate, mesh)?;
        let shift = 0.25 * t * rate.lambda0();
        let (worst_x, max_deviation) = sol
            .mesh
            .iter()
            .zip(&sol.v_values)
            .map(|(&x, &v)| (x, (v - (profile.v0(x) - shift)).abs()))
            .fold((mesh[0], 0.0), |a, b| if b.1 > a.1 { b } else { a });
        times.push(TimeCheck {
            t,
            max_deviation,
            worst_x,
            pass: max_deviation <= INVARIANCE_TOLERANCE,
        });
    }
    let jumps = classify_jumps(profile, s);
    let pieces_critical = profile.densities().iter().all(|&d| near(d, s) || near(d, 1.0 - s));
    Ok(InvarianceReport {
        lambda0: rate.lambda0(),
        rho_star: s,
        tolerance: INVARIANCE_TOLERANCE,
        invariant: times.iter().all(|c| c.pass),
        first_failure: times.iter().find(|c| !c.pass).map(|c| c.t),
        admissible: pieces_critical && jumps.iter().all(|j| j.allowed),
        times,
        jumps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TIMES: [f64; 4] = [0.25, 1.0, 2.0, 4.0];

    fn setup() -> (MacroRate, f64) {
        let r = MacroRate::new(0.64).unwrap();
        let s = r.rho_star();
        (r, s)
    }

    #[test]
    fn critical_constants_are_invariant() {
        let (r, s) = setup();
        for rho in [s, 1.0 - s] {
            let rep = invariance_check(&MacroProfile::constant(rho).unwrap(), &r, &TIMES).unwrap();
            assert!(rep.invariant && rep.admissible, "{rep:?}");
        }
    }

    #[test]
    fn non_entropy_shock_only_at_origin() {
        let (r, s) = setup();
        let at0 = MacroProfile::step(1.0 - s, 0.0, s).unwrap();
        let rep = invariance_check(&at0, &r, &TIMES).unwrap();
        assert!(rep.invariant && rep.admissible);
        assert_eq!(rep.jumps[0].kind, JumpKind::NonEntropy);

        let at1 = MacroProfile::step(1.0 - s, 1.0, s).unwrap();
        let rep = invariance_check(&at1, &r, &TIMES).unwrap();
        assert!(!rep.invariant && !rep.admissible);
        assert_eq!(rep.first_failure, Some(0.25));
    }

    #[test]
    fn three_jump_profile() {
        let (r, s) = setup();
        let p = MacroProfile::new(vec![-2.0, 0.0, 1.5], vec![s, 1.0 - s, s, 1.0 - s]).unwrap();
        let rep = invariance_check(&p, &r, &TIMES).unwrap();
        assert!(rep.invariant && rep.admissible);
        let kinds: Vec<_> = rep.jumps.iter().map(|j| j.kind).collect();
        assert_eq!(kinds, [JumpKind::Entropy, JumpKind::NonEntropy, JumpKind::Entropy]);
    }

    #[test]
    fn interior_density_is_not_invariant() {
        let (r, _) = setup();
        let rep = invariance_check(&MacroProfile::constant(0.5).unwrap(), &r, &TIMES).unwrap();
        assert!(!rep.invariant && !rep.admissible);
    }

    #[test]
    fn band_precondition() {
        let (r, _) = setup();
        assert!(invariance_check(&MacroProfile::constant(0.1).unwrap(), &r, &TIMES).is_err());
        assert!(invariance_check(&MacroProfile::constant(0.2).unwrap(), &r, &[]).is_err());
    }
}
