//! Canonical units and physical constants.
//!
//! Every public quantity in this crate uses one fixed unit system:
//!
//! | quantity        | unit           |
//! |-----------------|----------------|
//! | energy          | meV            |
//! | length          | nm             |
//! | time            | ps             |
//! | electric field  | kV/cm          |
//! | dipole moment   | e·nm           |
//!
//! Conversions (e.g. e·Å on the command line) happen at the I/O boundary only.

/// Coulomb constant times the elementary charge squared, e²/4πε₀, in meV·nm.
pub const COULOMB_K_E2: f64 = 1439.96;

/// Reduced Planck constant in meV·ps.
pub const HBAR: f64 = 0.658_211_9;

/// Planck constant in meV·ps.
pub const PLANCK_H: f64 = 4.135_668;

/// ħ²/2m₀ in meV·nm².
pub const HBAR2_OVER_2M0: f64 = 38.0998;

/// Potential energy of a unit charge displaced by 1 nm in a 1 kV/cm field, in meV.
pub const FIELD_ENERGY_PER_NM: f64 = 0.1;

/// One e·Å expressed in e·nm.
pub const E_ANGSTROM: f64 = 0.1;

/// Default relative dielectric constant of the host medium.
pub const DEFAULT_EPSILON_R: f64 = 10.0;

/// Converts a dipole from e·Å to e·nm.
pub fn e_angstrom_to_e_nm(d: f64) -> f64 {
    d * E_ANGSTROM
}
