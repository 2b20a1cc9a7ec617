use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use super::{
    concurrence, evolve_driven, evolve_free, mixing_coefficient, DrivePattern, DynamicsError,
    PulseSpec, TwoQubitHamiltonian, TwoQubitState,
};
use crate::units::HBAR;

/// c_mix² above which the gate is flagged as degraded.
const MIXING_WARN: f64 = 0.01;
/// c_mix² above which the biexciton scheme is refused.
const MIXING_MAX: f64 = 0.1;

/// Result of simulating CNOT₁₂ on the four basis inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct CnotReport {
    pub pulse: PulseSpec,
    /// Mean population of the ideal output over the four basis inputs.
    pub fidelity: f64,
    /// Output populations, row k for input basis state k.
    pub populations: [[f64; 4]; 4],
    pub warning: Option<String>,
}

fn check_mixing(h: &TwoQubitHamiltonian) -> Result<Option<String>, DynamicsError> {
    if h.v_xx == 0.0 {
        return Err(DynamicsError::NoBiexcitonShift);
    }
    if h.v_f == 0.0 {
        return Ok(None);
    }
    let c = mixing_coefficient(h.v_f, h.delta0())?;
    let c2 = c * c;
    if c2 > MIXING_MAX {
        return Err(DynamicsError::MixingTooLarge(c2));
    }
    Ok((c2 > MIXING_WARN).then(|| {
        format!("basis mixing c^2 = {c2:.4} exceeds {MIXING_WARN}; gate fidelity is reduced")
    }))
}

/// Default Rabi energy for the energy-selective gates, |V_XX|/20.
pub fn default_rabi(h: &TwoQubitHamiltonian) -> f64 {
    h.v_xx.abs() / 20.0
}

/// Flips dot II conditional on dot I with a π pulse at ε₁₂ = ω₂ + V_XX − δ.
pub fn cnot12(h: &TwoQubitHamiltonian, omega_rabi: f64) -> Result<CnotReport, DynamicsError> {
    let warning = check_mixing(h)?;
    let carrier = h.epsilon12().ok_or(DynamicsError::UndefinedMixing)?;
    let pulse = PulseSpec::with_area(carrier, omega_rabi, PI);
    pulse.validate()?;
    let target = [0b00, 0b01, 0b11, 0b10];
    let mut populations = [[0.0; 4]; 4];
    let mut total = 0.0;
    for (k, &want) in target.iter().enumerate() {
        let out = evolve_driven(&TwoQubitState::basis(k), h, &pulse, &DrivePattern::uniform())?;
        populations[k] = out.populations();
        total += populations[k][want];
    }
    Ok(CnotReport { pulse, fidelity: total / 4.0, populations, warning })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForsterBell {
    pub state: TwoQubitState,
    /// πħ/(4|V_F|), ps.
    pub t_star: f64,
    pub concurrence: f64,
    pub warning: Option<String>,
}

/// Lets |10⟩ evolve under the Förster coupling for a quarter transfer period.
pub fn bell_via_forster(h: &TwoQubitHamiltonian) -> Result<ForsterBell, DynamicsError> {
    if h.v_f == 0.0 {
        return Err(DynamicsError::NoCoupling);
    }
    let ratio = h.delta0() / h.v_f;
    let warning = (ratio.abs() > 0.1).then(|| {
        format!("|delta0/V_F| = {:.3} is not small; the output is not maximally entangled", ratio.abs())
    });
    let t_star = PI * HBAR / (4.0 * h.v_f.abs());
    let state = evolve_free(&TwoQubitState::basis(0b10), h, t_star)?;
    let c = concurrence(&state)?;
    Ok(ForsterBell { state, t_star, concurrence: c, warning })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellSign {
    /// (|00⟩ + |11⟩)/√2
    Plus,
    /// (|00⟩ − |11⟩)/√2
    Minus,
}

impl BellSign {
    pub fn target(self) -> TwoQubitState {
        let s = match self {
            BellSign::Plus => 1.0,
            BellSign::Minus => -1.0,
        };
        TwoQubitState::from_real([FRAC_1_SQRT_2, 0.0, 0.0, s * FRAC_1_SQRT_2]).expect("normalized")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiexcitonBell {
    /// Final state in the frame rotating with the bare diagonal energies.
    pub state: TwoQubitState,
    pub lab_state: TwoQubitState,
    pub pulses: [PulseSpec; 2],
    pub fidelity: f64,
    pub concurrence: f64,
    pub warning: Option<String>,
}

/// |00⟩ → (|00⟩ ± |11⟩)/√2 with a π/2 (or 3π/2) pulse at ω₁ followed by a
/// π pulse at ε₁₂.
pub fn bell_via_biexciton(
    h: &TwoQubitHamiltonian,
    omega_rabi: f64,
    sign: BellSign,
) -> Result<BiexcitonBell, DynamicsError> {
    let warning = check_mixing(h)?;
    let carrier2 = h.epsilon12().ok_or(DynamicsError::UndefinedMixing)?;
    let area1 = match sign {
        BellSign::Plus => PI / 2.0,
        BellSign::Minus => 1.5 * PI,
    };
    let p1 = PulseSpec::with_area(h.omega1, omega_rabi, area1);
    p1.validate()?;
    let p2 = PulseSpec::with_area(carrier2, omega_rabi, PI).starting_at(p1.end());
    let pattern = DrivePattern::uniform();
    let mid = evolve_driven(&TwoQubitState::basis(0), h, &p1, &pattern)?;
    let lab_state = evolve_driven(&mid, h, &p2, &pattern)?;
    let state = lab_state.to_rotating_frame(h, p2.end());
    let fidelity = state.fidelity(&sign.target());
    let c = concurrence(&state)?;
    Ok(BiexcitonBell { state, lab_state, pulses: [p1, p2], fidelity, concurrence: c, warning })
}

/// 1 − c_mix², the fidelity of a biexciton-scheme operation limited by
/// Förster mixing of the one-exciton states.
pub fn biexciton_scheme_fidelity(v_f: f64, delta0: f64) -> Result<f64, DynamicsError> {
    let c = mixing_coefficient(v_f, delta0)?;
    Ok(1.0 - c * c)
}

/// Applies exp(−iφ(σz⊗I + I⊗σz)/2) = diag(e^{−iφ}, 1, 1, e^{iφ}).
pub fn collective_dephasing(state: &TwoQubitState, phi: f64) -> TwoQubitState {
    let a = state.amplitudes();
    TwoQubitState::from_raw([
        a[0] * Complex64::from_polar(1.0, -phi),
        a[1],
        a[2],
        a[3] * Complex64::from_polar(1.0, phi),
    ])
}

/// Fidelity of a {|01⟩, |10⟩} logical state after collective dephasing.
pub fn dfs_dephasing_check(state: &TwoQubitState, phi: f64) -> Result<f64, DynamicsError> {
    let p = state.populations();
    let outside = p[0] + p[3];
    if outside > 1e-12 {
        return Err(DynamicsError::SubspaceViolation(outside));
    }
    Ok(state.fidelity(&collective_dephasing(state, phi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn register(v_f: f64, v_xx: f64) -> TwoQubitHamiltonian {
        TwoQubitHamiltonian::new(0.0, 1500.0, 1000.0, v_f, v_xx)
    }

    #[test]
    fn cnot_without_shift_is_refused() {
        assert_eq!(cnot12(&register(0.0, 0.0), 6.0), Err(DynamicsError::NoBiexcitonShift));
    }

    #[test]
    fn cnot_mixing_thresholds() {
        // c² ≈ (V/Δ)²: 0.05² passes quietly, 0.15² warns, 0.4² is refused.
        assert!(check_mixing(&register(25.0, 120.0)).unwrap().is_none());
        assert!(check_mixing(&register(75.0, 120.0)).unwrap().is_some());
        assert!(matches!(check_mixing(&register(200.0, 120.0)), Err(DynamicsError::MixingTooLarge(_))));
        let res = TwoQubitHamiltonian::new(0.0, 1000.0, 1000.0, 1.0, 120.0);
        assert!(matches!(cnot12(&res, 6.0), Err(DynamicsError::MixingTooLarge(_))));
    }

    #[test]
    fn cnot_default_rabi_is_high_fidelity() {
        let h = register(0.0, 120.0);
        let rep = cnot12(&h, default_rabi(&h)).unwrap();
        assert!(rep.fidelity >= 0.99, "{}", rep.fidelity);
        assert!(rep.warning.is_none());
    }

    #[test]
    fn forster_bell_resonant() {
        let r = bell_via_forster(&TwoQubitHamiltonian::new(0.0, 5.0, 5.0, 1.0, 0.0)).unwrap();
        assert!((r.concurrence - 1.0).abs() < 1e-9);
        assert!(r.warning.is_none());
        assert!(bell_via_forster(&register(0.0, 1.0)).is_err());
    }

    #[test]
    fn scheme_fidelity_limits() {
        assert_eq!(biexciton_scheme_fidelity(0.0, 2.0).unwrap(), 1.0);
        assert!((biexciton_scheme_fidelity(3.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((biexciton_scheme_fidelity(0.1, 1.0).unwrap() - 0.990).abs() < 1e-3);
    }

    #[test]
    fn dephasing_contrast_state() {
        let bell = BellSign::Plus.target();
        let f = collective_dephasing(&bell, 0.3).fidelity(&bell);
        assert!((f - 0.3f64.cos().powi(2)).abs() < 1e-14);
        assert!(matches!(dfs_dephasing_check(&bell, 0.3), Err(DynamicsError::SubspaceViolation(_))));
    }
}
