//! Exact-diagonalization laboratory for occupation-number correlations and
//! convex-cone entanglement in small fermion models.
//!
//! The crate is organized around five building blocks:
//!
//! - [`fock`]: bit-encoded fermionic Fock spaces and exact operator algebra,
//! - [`solver`]: dense and Lanczos eigensolvers for materialized Hamiltonians,
//! - [`models`]: Hamiltonian builders with closed-form analytic companions,
//! - [`probes`]: the normalized irreducible correlator `alpha` in three
//!   realizations plus the frequency-kernel quadrature,
//! - [`cone`]: generalized entanglement via entropy-minimal decompositions
//!   over a designated set of pure state functionals.
//!
//! The `entanglab` binary drives all of it from TOML run configurations; the
//! [`verify`] module bundles the oracle batteries behind the `verify`
//! subcommand.

pub mod cli;
pub mod cone;
pub mod error;
pub mod fock;
pub mod models;
pub mod probes;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
