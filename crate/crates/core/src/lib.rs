//! Unified (alpha, mu)-entropies and entropic quantum-speed-limit bounds for
//! nonunitary dynamics: Kraus channels, non-Hermitian Hamiltonians, and
//! reduced many-body evolution, over dense complex linear algebra.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`]: density matrices, Hermitian eigensolves, Schatten norms,
//!   partial traces, matrix exponential;
//! - [`entropy`]: alpha-purity and the unified entropy family with its
//!   limiting branches and property battery;
//! - [`qsl`]: the bound chain over sampled trajectories (weight function,
//!   integrated bound, relative error, QSL time);
//! - [`channels`], [`nonhermitian`], [`manybody`]: the three dynamics
//!   families with their specialized bounds and closed forms;
//! - [`random`]: seeded random inputs for tests and scans.
//!
//! All values are immutable after construction and all operations are pure
//! functions of their inputs, so scans over parameter grids parallelize
//! freely.

pub mod channels;
pub mod entropy;
pub mod linalg;
pub mod manybody;
pub mod nonhermitian;
pub mod qsl;
pub mod random;

pub use entropy::{EntropyBranch, EntropyParams};
pub use linalg::{linspace, BlochParams, ComplexMatrix, DensityMatrix, Subsystem, C64};
pub use qsl::{BoundReport, Trajectory, KAPPA_FLOOR};
