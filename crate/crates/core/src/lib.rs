//! Optimal joint-measurability sharpness thresholds for sets of qubit spin
//! observables, on single-copy, k-identical-copy and antiparallel-pair
//! configurations.
//!
//! The crate builds the threshold maximization problems as semidefinite
//! programs and solves them with a small dense interior-point method, and it
//! also constructs the known closed-form optimal POVMs and verifies them
//! against the defining marginal identities. The headline phenomenon is a
//! reversal of the complementarity ordering between observable sets when the
//! probe configuration changes from identical copies to antiparallel pairs.
//!
//! Modules:
//! - [`linalg`]: dense complex operator algebra on up to four qubits.
//! - [`observables`]: the SyTri / SyTet / MUB direction sets and the
//!   symmetric one-parameter family interpolating them.
//! - [`symspace`]: Dicke basis, symmetric projector and tensor-power span
//!   ranks behind the copy-counting impossibility argument.
//! - [`jointmeas`]: marginal targets, closed-form POVMs, certificate
//!   verification and the equatorial-plane conjugation transform.
//! - [`sdp`]: threshold SDPs, the interior-point solver, bisection
//!   cross-validation, copy-count search and the angle sweep.

pub mod error;
pub mod jointmeas;
pub mod linalg;
pub mod observables;
pub mod sdp;
pub mod symspace;

pub use error::{Error, Result};
