//! Quantum Fisher information for phase estimation with entangled coherent
//! states (ECS) in a lossy Mach-Zehnder interferometer.
//!
//! The crate is organised bottom-up:
//!
//! - [`rank2`]: closed-form eigen-decomposition of 2×2 density matrices and of
//!   rank-2 operators written on a nonorthogonal pair of kets, solved along two
//!   independent routes (Gram-Schmidt recast, and the direct nonsymmetric
//!   coefficient problem).
//! - [`qfi`]: the support-restricted QFI for unitary phase families, the
//!   pure-state special case, an SLD finite-difference oracle and the
//!   Cramér-Rao bound.
//! - [`fock`]: truncated Fock-space states and operators. This is the
//!   independent numerical oracle for everything in [`ecs`].
//! - [`ecs`]: the analytic lossy-ECS QFI with every intermediate exposed.
//! - [`limits`]: shot-noise, Heisenberg and Hofmann references, crossing
//!   reflectivities and curve sweeps.
//!
//! All public operations are pure functions of their inputs.

pub mod ecs;
pub mod error;
pub mod fock;
pub mod limits;
pub mod qfi;
pub mod rank2;
pub mod tolerances;

pub use error::{Error, Result};

/// Complex double used throughout.
pub type C64 = nalgebra::Complex<f64>;
