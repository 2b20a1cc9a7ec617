//! Exciton couplings between cuboidal quantum dots and two-qubit logic on the
//! resulting Hamiltonian.
//!
//! The crate is layered bottom-up:
//!
//! - [`units`] and [`linalg`]: canonical units, constants, a dense symmetric
//!   eigensolver and 4×4 complex propagators.
//! - [`envelope`]: effective-mass envelope states of electrons and holes in a
//!   cuboidal dot, optionally in an electric field.
//! - [`coupling`]: point-dipole biexciton shift and Förster transfer between
//!   two dots.
//! - [`dynamics`]: the two-exciton Hamiltonian, its eigensystem, free and
//!   laser-driven evolution, and the gate/entanglement protocols built on it.
//! - [`scenario`]: configuration parsing, parameter sweeps, figure tables and
//!   CSV output for the command-line tool.

pub mod units;
pub mod linalg;
pub mod envelope;
pub mod coupling;
pub mod dynamics;
pub mod scenario;
