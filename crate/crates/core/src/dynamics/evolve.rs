use std::f64::consts::PI;

use num_complex::Complex64;

use super::{eigensystem, DynamicsError, TwoQubitHamiltonian, TwoQubitState};
use crate::linalg::{cmat_apply, cnorm, expm_i_h_t, CVec4};
use crate::units::HBAR;

/// Upper bound on the number of RK4 steps a single pulse may take.
pub const MAX_RK4_STEPS: u64 = 20_000_000;

/// Largest tolerated norm change in one RK4 step before renormalization.
const MAX_STEP_DRIFT: f64 = 1e-8;

/// Exact free evolution exp(−iHt/ħ)|ψ⟩.
pub fn evolve_free(
    state: &TwoQubitState,
    h: &TwoQubitHamiltonian,
    t: f64,
) -> Result<TwoQubitState, DynamicsError> {
    let u = expm_i_h_t(&h.matrix(), t)?;
    TwoQubitState::normalized(cmat_apply(&u, state.amplitudes()))
}

/// Square laser pulse.
///
/// In RWA mode each coupled pair (lo, hi) gets the matrix element
/// H[hi][lo] = (Ω/2)·w·e^{−i(ωt/ħ+φ)}; in full mode both off-diagonals carry
/// Ω·w·cos(ωt/ħ+φ). `t` is absolute time, so pulses in a sequence stay phase
/// coherent when `start` is set to the end of the previous one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    /// Photon energy ω, meV.
    pub carrier: f64,
    /// Rabi energy Ω, meV.
    pub rabi: f64,
    /// ps.
    pub duration: f64,
    /// rad.
    pub phase: f64,
    pub rwa: bool,
    /// Absolute start time, ps.
    pub start: f64,
}

impl PulseSpec {
    pub fn new(carrier: f64, rabi: f64, duration: f64) -> Self {
        Self { carrier, rabi, duration, phase: -PI / 2.0, rwa: true, start: 0.0 }
    }

    /// Pulse whose area Ω·T/ħ equals `area`.
    pub fn with_area(carrier: f64, rabi: f64, area: f64) -> Self {
        Self::new(carrier, rabi, area * HBAR / rabi)
    }

    pub fn phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn full_drive(mut self) -> Self {
        self.rwa = false;
        self
    }

    pub fn starting_at(mut self, start: f64) -> Self {
        self.start = start;
        self
    }

    pub fn end(&self) -> f64 {
        self.start + self.duration
    }

    /// Pulse area Ω·T/ħ in radians.
    pub fn area(&self) -> f64 {
        self.rabi * self.duration / HBAR
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |m: &str| Err(DynamicsError::InvalidPulse(m.to_string()));
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return bad("duration must be positive and finite");
        }
        if !(self.rabi > 0.0 && self.rabi.is_finite()) {
            return bad("Rabi energy must be positive and finite");
        }
        if !self.carrier.is_finite() || !self.phase.is_finite() || !self.start.is_finite() {
            return bad("carrier, phase and start must be finite");
        }
        Ok(())
    }
}

/// Relative dipole weights of the four single-flip transitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivePattern {
    /// |00⟩↔|01⟩, |00⟩↔|10⟩, |01⟩↔|11⟩, |10⟩↔|11⟩.
    pub weights: [f64; 4],
}

impl DrivePattern {
    pub const PAIRS: [(usize, usize); 4] = [(0, 1), (0, 2), (1, 3), (2, 3)];

    /// Equal Rabi energy on every transition.
    pub fn uniform() -> Self {
        Self { weights: [1.0; 4] }
    }

    /// Only the transitions that flip dot II.
    pub fn qubit2_only() -> Self {
        Self { weights: [1.0, 0.0, 0.0, 1.0] }
    }

    /// Only the transitions that flip dot I.
    pub fn qubit1_only() -> Self {
        Self { weights: [0.0, 1.0, 1.0, 0.0] }
    }
}

impl Default for DrivePattern {
    fn default() -> Self {
        Self::uniform()
    }
}

/// Drive in the interaction picture of the static Hamiltonian.
///
/// Amplitudes `a_j` multiply e^{−iE_j(t−t₀)/ħ}|v_j⟩ where (E_j, v_j) is the
/// closed-form eigensystem, so the RK4 error scales with the drive alone.
struct Driven<'a> {
    energies: [f64; 4],
    /// Co-rotating drive operator (Ω/2)·Σ w|hi⟩⟨lo| in the eigenbasis.
    down: [[f64; 4]; 4],
    pulse: &'a PulseSpec,
}

impl Driven<'_> {
    fn new<'a>(h: &TwoQubitHamiltonian, pulse: &'a PulseSpec, pattern: &DrivePattern) -> Driven<'a> {
        let es = eigensystem(h);
        let mut bare = [[0.0; 4]; 4];
        for (&(lo, hi), &w) in DrivePattern::PAIRS.iter().zip(&pattern.weights) {
            bare[hi][lo] = 0.5 * pulse.rabi * w;
        }
        let v = &es.vectors;
        let mut down = [[0.0; 4]; 4];
        for j in 0..4 {
            for k in 0..4 {
                let mut acc = 0.0;
                for a in 0..4 {
                    for b in 0..4 {
                        acc += v[j][a] * bare[a][b] * v[k][b];
                    }
                }
                down[j][k] = acc;
            }
        }
        Driven { energies: es.energies(), down, pulse }
    }

    /// da/dt at absolute time `t`; `tau` is the time since the pulse start.
    fn rhs(&self, t: f64, tau: f64, a: &CVec4) -> CVec4 {
        let p = self.pulse;
        let arg = p.carrier * t / HBAR + p.phase;
        let rot = self.energies.map(|e| Complex64::from_polar(1.0, e * tau / HBAR));
        let (fd, fu) = if p.rwa {
            let d = Complex64::from_polar(1.0, -arg);
            (d, d.conj())
        } else {
            let c = Complex64::new(2.0 * arg.cos(), 0.0);
            (c, c)
        };
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for j in 0..4 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..4 {
                let m = fd * self.down[j][k] + fu * self.down[k][j];
                acc += m * rot[k].conj() * a[k];
            }
            out[j] = acc * rot[j] * Complex64::new(0.0, -1.0 / HBAR);
        }
        out
    }
}

fn axpy(y: &CVec4, a: f64, x: &CVec4) -> CVec4 {
    [y[0] + x[0] * a, y[1] + x[1] * a, y[2] + x[2] * a, y[3] + x[3] * a]
}

/// Integrates the driven Schrödinger equation over `pulse` with fixed-step RK4.
///
/// The static part of H is propagated exactly; RK4 integrates only the drive,
/// in the interaction picture. The step obeys dt ≤ min(ħ/(50·E_max), T/1000).
pub fn evolve_driven(
    state: &TwoQubitState,
    h: &TwoQubitHamiltonian,
    pulse: &PulseSpec,
    pattern: &DrivePattern,
) -> Result<TwoQubitState, DynamicsError> {
    pulse.validate()?;
    let bare = h.diagonal();
    let lo = bare.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = bare.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let wmax = pattern.weights.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    let e_max = (hi - lo) + h.v_f.abs() + pulse.rabi * wmax;
    let mut dt = pulse.duration / 1000.0;
    if e_max > 0.0 {
        dt = dt.min(HBAR / (50.0 * e_max));
    }
    let steps_f = (pulse.duration / dt).ceil();
    if !(steps_f <= MAX_RK4_STEPS as f64) {
        return Err(DynamicsError::IntegrationResolution {
            steps: if steps_f.is_finite() { steps_f as u64 } else { u64::MAX },
            max: MAX_RK4_STEPS,
        });
    }
    let steps = steps_f as u64;
    let dt = pulse.duration / steps as f64;

    let sys = Driven::new(h, pulse, pattern);
    let vecs = eigensystem(h).vectors;
    let psi0 = state.amplitudes();
    let mut a = [Complex64::new(0.0, 0.0); 4];
    for j in 0..4 {
        for i in 0..4 {
            a[j] += psi0[i] * vecs[j][i];
        }
    }
    for n in 0..steps {
        let tau = n as f64 * dt;
        let t = pulse.start + tau;
        let h2 = 0.5 * dt;
        let k1 = sys.rhs(t, tau, &a);
        let k2 = sys.rhs(t + h2, tau + h2, &axpy(&a, h2, &k1));
        let k3 = sys.rhs(t + h2, tau + h2, &axpy(&a, h2, &k2));
        let k4 = sys.rhs(t + dt, tau + dt, &axpy(&a, dt, &k3));
        for k in 0..4 {
            a[k] += (k1[k] + (k2[k] + k3[k]) * 2.0 + k4[k]) * (dt / 6.0);
        }
        let norm = cnorm(&a);
        if (norm - 1.0).abs() > MAX_STEP_DRIFT {
            return Err(DynamicsError::NormDrift(norm - 1.0));
        }
        a = a.map(|x| x / norm);
    }
    let mut psi = [Complex64::new(0.0, 0.0); 4];
    for (j, e) in sys.energies.iter().enumerate() {
        let c = a[j] * Complex64::from_polar(1.0, -e * pulse.duration / HBAR);
        for i in 0..4 {
            psi[i] += c * vecs[j][i];
        }
    }
    Ok(TwoQubitState::from_raw(psi))
}
