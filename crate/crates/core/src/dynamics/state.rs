use num_complex::Complex64;

use super::{DynamicsError, TwoQubitHamiltonian};
use crate::linalg::{cdot, cnorm, CVec4};

const NORM_TOL: f64 = 1e-10;

/// Normalized pure state over {|00⟩, |01⟩, |10⟩, |11⟩}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    amps: CVec4,
}

impl TwoQubitState {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amps: CVec4) -> Result<Self, DynamicsError> {
        let n = cnorm(&amps);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(DynamicsError::NotNormalized(n));
        }
        Ok(Self { amps })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amps: CVec4) -> Result<Self, DynamicsError> {
        let n = cnorm(&amps);
        if !(n > 0.0 && n.is_finite()) {
            return Err(DynamicsError::NotNormalized(n));
        }
        Ok(Self { amps: amps.map(|a| a / n) })
    }

    pub fn from_real(amps: [f64; 4]) -> Result<Self, DynamicsError> {
        Self::normalized(amps.map(|a| Complex64::new(a, 0.0)))
    }

    /// Computational basis state; `index` is the binary label, e.g. 0b10 for |10⟩.
    pub fn basis(index: usize) -> Self {
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn amplitudes(&self) -> &CVec4 {
        &self.amps
    }

    pub fn populations(&self) -> [f64; 4] {
        self.amps.map(|a| a.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        cnorm(&self.amps)
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &TwoQubitState) -> f64 {
        cdot(&self.amps, &other.amps).norm_sqr()
    }

    /// Removes the free phases e^{−iE_k t/ħ} of the bare diagonal energies of `h`.
    pub fn to_rotating_frame(&self, h: &TwoQubitHamiltonian, t: f64) -> Self {
        let diag = h.diagonal();
        let mut amps = self.amps;
        for (a, e) in amps.iter_mut().zip(diag) {
            *a *= Complex64::from_polar(1.0, e * t / crate::units::HBAR);
        }
        Self { amps }
    }

    pub(crate) fn from_raw(amps: CVec4) -> Self {
        Self { amps }
    }
}

/// Wootters concurrence of a pure two-qubit state, 2|a·d − b·c|.
pub fn concurrence(state: &TwoQubitState) -> Result<f64, DynamicsError> {
    let n = state.norm();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(DynamicsError::NotNormalized(n));
    }
    let [a, b, c, d] = state.amps;
    Ok((2.0 * (a * d - b * c).norm()).min(1.0))
}
