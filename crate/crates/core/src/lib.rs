//! Workbench for the totally asymmetric simple exclusion process with a slow bond.
//!
//! The crate is split along the three levels at which the model is studied:
//!
//! * [`lpp`]: last-passage percolation on the quadrant (diagonal defect) and on
//!   the wedge lattice (columnar defect); Monte Carlo estimation of the defect
//!   constant `κ(r)` and its rigorous bounds.
//! * [`hydro`]: macroscopic objects such as the flux `f₀`, its conjugate `g₀`, the
//!   homogeneous shape `γ₀`, the defect-aware shape `Γ^q`, the control cost
//!   `I(x,t,q)` and the variational value function `v(x,t)`.
//! * [`tasep`]: event-driven particle simulation with per-bond Poisson clocks,
//!   the height/current representation, the auxiliary `ξ` interfaces and the
//!   exact variational coupling.
//!
//! [`harness`] ties the three together into reproducible experiments.

pub mod error;
pub mod harness;
pub mod hydro;
pub mod lpp;
pub(crate) mod rng;
pub mod stats;
pub mod tasep;

pub use error::{Error, Result};
