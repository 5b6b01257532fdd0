//! Microscopic slow-bond exclusion process.
//!
//! Particles on `ℤ` (truncated to a window `[−L, L]`) jump one step to the right
//! across bond `i` (from site `i` to `i+1`) at the epochs of a Poisson clock
//! `𝒟_i`, provided the target is empty. Bond 0 rings at rate `r`, all others at
//! rate 1. Every clock is a keyed random stream, so any collection of processes
//! built from the same [`BondClocks`] is coupled through shared noise.

mod clocks;
mod coupling;
mod exclusion;
mod heights;
mod init;
mod paircorr;
mod snapshot;
mod window;
mod xi;

pub use clocks::{BondClocks, BondDriven, BondStream, ClockQueue};
pub use coupling::{coupling_check, CouplingMismatch, CouplingReport};
pub use exclusion::{evolve, first_jump_time, ExclusionProcess, Simulation};
pub use heights::{evolve_heights, heights_from_occ, occ_from_heights, HeightConfig, HeightProcess};
pub use init::{init_bernoulli, init_canonical, init_from_profile, init_from_profile_replica, measure_density};
pub use paircorr::{stationary_pair_correlation, PairCorrelation};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot};
pub use window::{Boundary, Occupancies, Window};
pub use xi::{level_crossings, simulate_xi, xi_initial, XiProcess, XiState};
