//! Solvers for a one-dimensional model of congested self-propelled flow.
//!
//! Particles move at unit speed in direction θ; the density ρ is capped by a
//! maximal packing density ρ*, enforced at finite ε by the singular pressure
//! `ε·p(ρ)` and, in the limit ε → 0, by a congestion constraint with a
//! Lagrange-multiplier pressure `p̄`.
//!
//! * [`pressure_law`]: constitutive functions and angle potentials.
//! * [`wave_structure`]: eigenstructure, Hugoniot loci, rarefaction curves.
//! * [`riemann_exact`]: exact Riemann solver at finite ε.
//! * [`riemann_limit`]: Riemann solutions of the ε → 0 limit and the
//!   compressible/incompressible interface conditions.
//! * [`cluster_dynamics`]: sticky collisions of congested blocks.
//! * [`godunov`]: first-order Godunov scheme built on the exact solver.
//! * [`verify`]: seeded invariant suite.

// Negated comparisons are how domain checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cluster_dynamics;
pub mod error;
pub mod godunov;
pub mod numerics;
pub mod pressure_law;
pub mod riemann_exact;
pub mod riemann_limit;
pub mod verify;
pub mod wave_structure;

pub use error::{Error, Result};
