//! Macroscopic (Euler-scale) description of the slow-bond process.
//!
//! Everything here is a pure function of its inputs. The macroscopic rate is
//! `λ(x) = 1` off the origin and `λ(0) ∈ (0,1]` at it; [`MacroRate`] carries
//! `λ(0)` together with `B = √(1 − λ(0))` and the critical density `ρ*`.

mod cost;
mod flux;
mod invariance;
mod profile;
mod rate;
mod shape;
mod value;

pub use cost::{classify, control_cost, optimal_path, CostCase, PathDescription, PathKind};
pub use flux::{f0, g0, gamma0};
pub use invariance::{invariance_check, invariance_check_on, InvarianceReport, JumpKind, ProfileJump, TimeCheck};
pub use profile::{MacroProfile, ProfileSpec, SegmentSpec};
pub use rate::MacroRate;
pub use shape::{big_gamma, level_g};
pub use value::{
    density, flat_profile_oracle, uniform_mesh, value_at, value_function, value_function_with, HydroSolution, SupMethod,
};
