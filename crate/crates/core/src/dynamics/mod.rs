//! Two-exciton qubit register: Hamiltonian, eigensystem, state evolution and
//! the gate and entanglement protocols that run on it.
//!
//! Basis ordering is {|00⟩, |01⟩, |10⟩, |11⟩}, the first digit referring to
//! dot I. Energies are in meV and times in ps throughout.

use thiserror::Error;

use crate::linalg::LinalgError;

mod evolve;
mod hamiltonian;
mod protocols;
mod state;

pub use evolve::{evolve_driven, evolve_free, DrivePattern, PulseSpec, MAX_RK4_STEPS};
pub use hamiltonian::{eigensystem, mixing_coefficient, EigenSystem, TwoQubitHamiltonian};
pub use protocols::{
    bell_via_biexciton, bell_via_forster, biexciton_scheme_fidelity, cnot12, collective_dephasing,
    default_rabi, dfs_dephasing_check, BellSign, BiexcitonBell, CnotReport, ForsterBell,
};
pub use state::{concurrence, TwoQubitState};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("mixing is undefined when both the Förster coupling and the splitting vanish")]
    UndefinedMixing,
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("invalid pulse: {0}")]
    InvalidPulse(String),
    #[error("integration needs {steps} RK4 steps, more than the limit of {max}")]
    IntegrationResolution { steps: u64, max: u64 },
    #[error("norm drifted by {0:e} in one RK4 step")]
    NormDrift(f64),
    #[error("biexciton shift is zero: the conditional transitions are indistinguishable")]
    NoBiexcitonShift,
    #[error("basis mixing c^2 = {0:.4} is too large for the biexciton scheme")]
    MixingTooLarge(f64),
    #[error("Förster coupling is zero: no transfer dynamics")]
    NoCoupling,
    #[error("state leaves the {{|01>, |10>}} subspace (weight {0:e} outside)")]
    SubspaceViolation(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
