//! Keyed random streams.
//!
//! Every random quantity in the crate is addressed by `(seed, domain, replica,
//! stream)`. The first three select a ChaCha key, the last selects one of the
//! 2^64 ChaCha streams under that key. Grids use one stream per row, clocks one
//! stream per bond, so any row or bond can be regenerated in isolation and
//! replicas can run on separate workers without coordination.

use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
#[repr(u64)]
pub(crate) enum Domain {
    Quadrant = 1,
    Wedge = 2,
    Clock = 3,
    Occupancy = 4,
}

pub(crate) fn keyed(seed: u64, domain: Domain, replica: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(domain as u64).to_le_bytes());
    key[16..24].copy_from_slice(&replica.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

/// Mean-one exponential variate, strictly positive and finite.
///
/// Inversion of an open-interval uniform: exactly one 64-bit draw per variate,
/// which keeps positions within a stream predictable.
#[inline]
pub(crate) fn unit_exp<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = Open01.sample(rng);
    -u.ln()
}
