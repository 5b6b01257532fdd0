use rand::seq::index::sample;
use rand::Rng;

use super::window::{Occupancies, Window};
use crate::error::{Error, Result};
use crate::hydro::MacroProfile;
use crate::rng::{keyed, Domain};

fn check_density(rho: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::param("rho", format!("density must lie in [0, 1], got {rho}")))
    }
}

/// Independent Bernoulli(ρ) occupations.
pub fn init_bernoulli(rho: f64, window: Window, seed: u64) -> Result<Occupancies> {
    check_density(rho)?;
    let mut rng = keyed(seed, Domain::Occupancy, 0, 0);
    let bits = window.sites().map(|_| rng.random_bool(rho)).collect();
    Occupancies::from_bits(window, bits)
}

/// Exactly `round(ρ·|window|)` particles on uniformly chosen sites.
pub fn init_canonical(rho: f64, window: Window, seed: u64) -> Result<Occupancies> {
    check_density(rho)?;
    let mut rng = keyed(seed, Domain::Occupancy, 0, 1);
    let count = (rho * window.len() as f64).round() as usize;
    let mut bits = vec![false; window.len()];
    for k in sample(&mut rng, window.len(), count) {
        bits[k] = true;
    }
    Occupancies::from_bits(window, bits)
}

/// Independent occupations with site `i` occupied with probability `ρ₀(i/n)`.
///
/// `cover` is the macroscopic range `[a, b]` the caller intends to observe;
/// the window must contain `[na, nb]`.
pub fn init_from_profile(
    profile: &MacroProfile,
    n: f64,
    window: Window,
    cover: (f64, f64),
    seed: u64,
) -> Result<Occupancies> {
    init_from_profile_replica(profile, n, window, cover, seed, 0)
}

/// [`init_from_profile`] for replica `replica` of `seed`.
pub fn init_from_profile_replica(
    profile: &MacroProfile,
    n: f64,
    window: Window,
    cover: (f64, f64),
    seed: u64,
    replica: u64,
) -> Result<Occupancies> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::param("n", format!("scale must be positive, got {n}")));
    }
    let (a, b) = cover;
    let (lo, hi) = ((n * a).floor() as i64, (n * b).ceil() as i64);
    if !(window.contains(lo) && window.contains(hi)) {
        return Err(Error::InvalidInput(format!(
            "window [-{0}, {0}] does not cover [{lo}, {hi}]",
            window.half_width
        )));
    }
    let mut rng = keyed(seed, Domain::Occupancy, replica, 0);
    let bits = window
        .sites()
        .map(|i| rng.random_bool(profile.density_at(i as f64 / n)))
        .collect();
    Occupancies::from_bits(window, bits)
}

/// `(1/n) Σ_{i=[na]+1}^{[nb]} η_i`.
pub fn measure_density(occ: &Occupancies, a: f64, b: f64, n: f64) -> Result<f64> {
    if n.is_nan() || n <= 0.0 || b < a {
        return Err(Error::InvalidInput(format!("bad range [{a}, {b}] at scale {n}")));
    }
    let first = (n * a).floor() as i64 + 1;
    let last = (n * b).floor() as i64;
    let w = occ.window();
    if last >= first && !(w.contains(first) && w.contains(last)) {
        return Err(Error::InvalidInput(format!(
            "sites {first}..={last} leave the window [-{0}, {0}]",
            w.half_width
        )));
    }
    let count = (first..=last).filter(|&i| occ.get(i)).count();
    Ok(count as f64 / n)
}
