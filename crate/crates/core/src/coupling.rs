//! Point-dipole couplings between two dots: the biexciton shift V_XX, Förster
//! transfer V_F, the Kronig-Penney estimate of the atomic interband dipole and
//! transfer times.
//!
//! Exchange contributions are taken as zero: the dots are assumed not to share
//! wavefunction amplitude.

use std::f64::consts::PI;

use thiserror::Error;

use crate::dynamics::{mixing_coefficient, TwoQubitHamiltonian};
use crate::envelope::{solve_exciton, BasisSpec, DotSpec, EnvelopeError};
use crate::units::{COULOMB_K_E2, DEFAULT_EPSILON_R, HBAR, PLANCK_H};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CouplingError {
    #[error("dot separation must be nonzero and finite")]
    SingularGeometry,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("Förster coupling is zero: no transfer")]
    NoTransfer,
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
}

type V3 = [f64; 3];

fn dot3(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Relative placement of dot II with respect to dot I.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    /// Centre-to-centre vector, nm.
    pub separation: V3,
    pub epsilon_r: f64,
}

impl PairGeometry {
    pub fn new(separation: V3, epsilon_r: f64) -> Self {
        Self { separation, epsilon_r }
    }

    /// Dot II displaced by `r` nm along `axis` (0 = x, the field axis).
    pub fn along(axis: usize, r: f64) -> Self {
        let mut s = [0.0; 3];
        s[axis] = r;
        Self::new(s, DEFAULT_EPSILON_R)
    }

    pub fn with_epsilon(mut self, epsilon_r: f64) -> Self {
        self.epsilon_r = epsilon_r;
        self
    }

    pub fn distance(&self) -> f64 {
        dot3(&self.separation, &self.separation).sqrt()
    }

    pub fn validate(&self) -> Result<(), CouplingError> {
        let r = self.distance();
        if !(r > 0.0 && r.is_finite()) {
            return Err(CouplingError::SingularGeometry);
        }
        if !(self.epsilon_r >= 1.0 && self.epsilon_r.is_finite()) {
            return Err(CouplingError::InvalidInput(format!(
                "relative permittivity must be >= 1, got {}",
                self.epsilon_r
            )));
        }
        Ok(())
    }

    /// Swaps the roles of the two dots.
    pub fn reversed(&self) -> Self {
        Self::new(self.separation.map(|x| -x), self.epsilon_r)
    }
}

/// (e²/4πε₀ε_r R³)·[p₁·p₂ − 3(p₁·R̂)(p₂·R̂)], dipoles in e·nm, result in meV.
pub fn dipole_dipole(p1: &V3, p2: &V3, geom: &PairGeometry) -> Result<f64, CouplingError> {
    geom.validate()?;
    let r = geom.distance();
    let n = geom.separation.map(|x| x / r);
    let angular = dot3(p1, p2) - 3.0 * dot3(p1, &n) * dot3(p2, &n);
    Ok(COULOMB_K_E2 / (geom.epsilon_r * r.powi(3)) * angular)
}

/// Biexciton shift V_XX from the two exciton dipoles (direct term only).
pub fn vxx_point_dipole(p_i: &V3, p_ii: &V3, geom: &PairGeometry) -> Result<f64, CouplingError> {
    dipole_dipole(p_i, p_ii, geom)
}

/// Förster matrix element, signed and as a magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForsterCoupling {
    pub signed: f64,
    pub magnitude: f64,
}

/// Förster coupling from the atomic interband dipoles, scaled by the
/// electron–hole envelope overlaps of each dot.
pub fn vf_dipole(
    r_i: &V3,
    r_ii: &V3,
    overlap_i: f64,
    overlap_ii: f64,
    geom: &PairGeometry,
) -> Result<ForsterCoupling, CouplingError> {
    for o in [overlap_i, overlap_ii] {
        if !(0.0..=1.0).contains(&o) {
            return Err(CouplingError::InvalidInput(format!("overlap {o} outside [0, 1]")));
        }
    }
    let signed = overlap_i * overlap_ii * dipole_dipole(r_i, r_ii, geom)?;
    Ok(ForsterCoupling { signed, magnitude: signed.abs() })
}

/// ⟨1|x|2⟩ between the two lowest states of an infinite well of width 2x,
/// 32x/9π², in e·nm.
pub fn kp_atomic_dipole(x: f64) -> Result<f64, CouplingError> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(CouplingError::InvalidInput(format!("well half-width must be >= 0, got {x}")));
    }
    Ok(32.0 * x / (9.0 * PI * PI))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferTime {
    /// h/|V_F|, ps.
    pub period: f64,
    /// πħ/(2|V_F|): time for complete transfer |10⟩ → |01⟩ on resonance, ps.
    pub half_oscillation: f64,
}

pub fn transfer_time(v_f: f64) -> Result<TransferTime, CouplingError> {
    if v_f == 0.0 {
        return Err(CouplingError::NoTransfer);
    }
    if !v_f.is_finite() {
        return Err(CouplingError::InvalidInput("coupling must be finite".into()));
    }
    let v = v_f.abs();
    Ok(TransferTime { period: PLANCK_H / v, half_oscillation: PI * HBAR / (2.0 * v) })
}

/// Asymptotic exciton dipole e·a for a dot of extent `a` along the field.
pub fn large_field_dipole_limit(a: f64) -> f64 {
    a
}

/// Everything needed to assemble the two-qubit Hamiltonian for a dot pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSet {
    pub omega1: f64,
    pub omega2: f64,
    pub delta0: f64,
    pub v_xx: f64,
    pub v_f: f64,
    /// V_F²/Δ₀; `None` when Δ₀ = 0.
    pub delta_shift: Option<f64>,
    pub c_mix: f64,
    pub overlap_i: f64,
    pub overlap_ii: f64,
    pub dipole_i: V3,
    pub dipole_ii: V3,
}

impl CouplingSet {
    pub fn hamiltonian(&self, omega0: f64) -> TwoQubitHamiltonian {
        TwoQubitHamiltonian::new(omega0, self.omega1, self.omega2, self.v_f, self.v_xx)
    }
}

/// Solves both dots in a common field along x and combines the results into
/// the couplings of the pair.
pub fn build_coupling_set(
    dot_i: &DotSpec,
    dot_ii: &DotSpec,
    geom: &PairGeometry,
    field: f64,
    atomic_i: &V3,
    atomic_ii: &V3,
    basis: &BasisSpec,
) -> Result<CouplingSet, CouplingError> {
    geom.validate()?;
    let ex_i = solve_exciton(dot_i, field, basis)?;
    let ex_ii = solve_exciton(dot_ii, field, basis)?;
    let (omega1, omega2) = (ex_i.energy(), ex_ii.energy());
    let delta0 = omega1 - omega2;
    let (dipole_i, dipole_ii) = (ex_i.dipole(), ex_ii.dipole());
    let (overlap_i, overlap_ii) = (ex_i.overlap().min(1.0), ex_ii.overlap().min(1.0));
    let v_xx = vxx_point_dipole(&dipole_i, &dipole_ii, geom)?;
    let v_f = vf_dipole(atomic_i, atomic_ii, overlap_i, overlap_ii, geom)?.signed;
    let delta_shift = (delta0 != 0.0).then(|| v_f * v_f / delta0);
    let c_mix = if v_f == 0.0 { 0.0 } else { mixing_coefficient(v_f, delta0).unwrap_or(0.0) };
    Ok(CouplingSet {
        omega1,
        omega2,
        delta0,
        v_xx,
        v_f,
        delta_shift,
        c_mix,
        overlap_i,
        overlap_ii,
        dipole_i,
        dipole_ii,
    })
}
