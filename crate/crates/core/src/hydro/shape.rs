use super::flux::gamma0_unchecked;
use super::MacroRate;
use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizer of `f` on `[a, b]` by golden-section search. Exact for concave `f`
/// up to `tol`; the endpoints are always compared as well.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    if b <= a {
        return (a, f(a));
    }
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [a, b] {
        let fx = f(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

fn in_cone(x: f64, y: f64) -> bool {
    y >= 0.0 && x >= -y
}

/// `Γ^q(x,y)`: the largest macroscopic passage time from the origin to `(x,y)`
/// when the column `x = q` has weight `κ = 4/λ(0)` per unit height.
///
/// Only two path shapes matter: the straight segment, and the path that climbs
/// the slow column from height `b₁` to `b₂`. The second objective
/// `γ₀(q,b₁) + κ(b₂−b₁) + γ₀(x−q, y−b₂)` is a sum of a concave function of `b₁`
/// and a concave function of `b₂`, so under `b₁ ≤ b₂` the maximum is either the
/// pair of unconstrained maximizers or lies on the diagonal `b₁ = b₂`.
pub fn big_gamma(q: f64, x: f64, y: f64, rate: &MacroRate) -> Result<f64> {
    if !in_cone(x, y) || !q.is_finite() {
        return Err(Error::Domain(format!("({x}, {y}) is outside the cone y >= 0, x >= -y")));
    }
    Ok(big_gamma_unchecked(q, x, y, rate))
}

fn big_gamma_unchecked(q: f64, x: f64, y: f64, rate: &MacroRate) -> f64 {
    let straight = gamma0_unchecked(x, y);
    if rate.is_homogeneous() {
        return straight;
    }
    let kappa = rate.kappa();
    let lo = (-q).max(0.0);
    let hi = y - (q - x).max(0.0);
    if hi < lo {
        return straight;
    }
    let h1 = |b: f64| gamma0_unchecked(q, b) - kappa * b;
    let h2 = |b: f64| kappa * b + gamma0_unchecked(x - q, y - b);
    let tol = 1e-12 * (1.0 + y.abs() + x.abs() + q.abs());
    let (b1, v1) = golden_max(h1, lo, hi, tol);
    let (b2, v2) = golden_max(h2, lo, hi, tol);
    let mut best = if b1 <= b2 {
        v1 + v2
    } else {
        golden_max(|b| h1(b) + h2(b), lo, hi, tol).1
    };
    // corners of the feasible triangle, as a guard
    for (c1, c2) in [(lo, lo), (lo, hi), (hi, hi)] {
        best = best.max(h1(c1) + h2(c2));
    }
    straight.max(best)
}

/// `g^q(x,t) = inf{y : (x,y) in the cone, Γ^q(x,y) ≥ t}`, by bisection to 1e−9.
pub fn level_g(q: f64, x: f64, t: f64, rate: &MacroRate) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    if !q.is_finite() || !x.is_finite() {
        return Err(Error::Domain("q and x must be finite".into()));
    }
    let floor = (-x).max(0.0);
    if big_gamma_unchecked(q, x, floor, rate) >= t {
        return Ok(floor);
    }
    // γ₀(x,y) ≥ y, so the level is crossed by y = floor + t
    let (mut lo, mut hi) = (floor, floor + t);
    while hi - lo > 1e-9 * (1.0 + hi) {
        let mid = 0.5 * (lo + hi);
        if big_gamma_unchecked(q, x, mid, rate) >= t {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hydro::{control_cost, g0, gamma0};

    fn rate(l: f64) -> MacroRate {
        MacroRate::new(l).unwrap()
    }

    #[test]
    fn golden_finds_interior_and_edges() {
        let (x, _) = golden_max(|x| -(x - 0.3).powi(2), -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        let (x, _) = golden_max(|x| x, -1.0, 2.0, 1e-12);
        assert_eq!(x, 2.0);
        let (x, _) = golden_max(|x| -x, -1.0, 2.0, 1e-12);
        assert_eq!(x, -1.0);
    }

    #[test]
    fn homogeneous_is_gamma0() {
        let h = MacroRate::homogeneous();
        for &(q, x, y) in &[(0.0, 0.0, 1.0), (0.5, 1.0, 2.0), (-3.0, -0.5, 0.7)] {
            assert_eq!(big_gamma(q, x, y, &h).unwrap(), gamma0(x, y).unwrap());
        }
    }

    #[test]
    fn column_through_origin() {
        for &l in &[0.3, 0.64, 0.9] {
            let r = rate(l);
            for &y in &[0.5, 1.0, 4.0] {
                let v = big_gamma(0.0, 0.0, y, &r).unwrap();
                assert!((v - 4.0 / l * y).abs() < 1e-9 * y);
            }
        }
    }

    #[test]
    fn never_below_straight_path() {
        let r = rate(0.5);
        for i in 0..15 {
            for j in 0..15 {
                for k in 0..15 {
                    let q = -2.0 + 4.0 * i as f64 / 14.0;
                    let y = 2.0 * j as f64 / 14.0;
                    let x = -y + 3.0 * k as f64 / 14.0;
                    assert!(big_gamma(q, x, y, &r).unwrap() >= gamma0(x, y).unwrap());
                }
            }
        }
        assert!(big_gamma(0.0, -2.0, 1.0, &r).is_err());
        assert!(big_gamma(0.0, 0.0, -1.0, &r).is_err());
    }

    #[test]
    fn brute_force_grid_agrees() {
        let r = rate(0.49);
        let k = r.kappa();
        for &(q, x, y) in &[(0.3, 1.0, 1.5), (-0.4, 0.2, 0.9), (1.5, 0.5, 2.0), (0.0, -0.3, 0.6)] {
            let lo = f64::max(0.0, -q);
            let hi = y - f64::max(0.0, q - x);
            let mut best = gamma0(x, y).unwrap();
            let n = 600;
            for a in 0..=n {
                for b in a..=n {
                    let b1 = lo + (hi - lo) * a as f64 / n as f64;
                    let b2 = lo + (hi - lo) * b as f64 / n as f64;
                    if hi < lo {
                        continue;
                    }
                    let v = gamma0_unchecked(q, b1) + k * (b2 - b1) + gamma0_unchecked(x - q, y - b2);
                    best = best.max(v);
                }
            }
            let v = big_gamma(q, x, y, &r).unwrap();
            assert!(v >= best - 1e-12);
            assert!(v - best < 1e-3 * (1.0 + best), "{v} vs {best}");
        }
    }

    #[test]
    fn level_curve_homogeneous() {
        let h = MacroRate::homogeneous();
        for i in 0..=20 {
            let t = 1.7;
            let x = -t + 2.0 * t * i as f64 / 20.0;
            let g = level_g(0.4, x, t, &h).unwrap();
            assert!((g - t * g0(x / t)).abs() < 1e-6, "x={x}");
        }
    }

    #[test]
    fn unreachable_defect_is_homogeneous() {
        let r = rate(0.5);
        for &x in &[-0.5, 0.0, 0.7] {
            let g = level_g(50.0, x, 1.0, &r).unwrap();
            assert!((g - g0(x)).abs() < 1e-6);
            let g = level_g(-50.0, x, 1.0, &r).unwrap();
            assert!((g - g0(x)).abs() < 1e-6);
        }
    }

    #[test]
    fn level_curve_is_control_cost() {
        for &l in &[0.36, 0.64, 0.9] {
            let r = rate(l);
            for &(x, t, q) in &[
                (0.1, 1.0, 0.0),
                (-0.2, 1.0, 0.1),
                (0.0, 2.0, 0.0),
                (0.3, 1.0, -1.0),
                (1.5, 1.0, 0.2),
            ] {
                let a = control_cost(x, t, q, &r).unwrap();
                let b = level_g(-q, x - q, t, &r).unwrap();
                assert!((a - b).abs() < 1e-6, "l={l} x={x} t={t} q={q}: {a} vs {b}");
            }
        }
    }
}
