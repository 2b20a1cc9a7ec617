use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::DynamicsError;
use crate::linalg::{cmat_zero, CMat4};

/// Two-exciton Hamiltonian in the computational basis.
///
/// ```text
/// | ω0   0       0       0            |
/// | 0    ω0+ω2   V_F     0            |
/// | 0    V_F     ω0+ω1   0            |
/// | 0    0       0       ω0+ω1+ω2+V_XX |
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitHamiltonian {
    pub omega0: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub v_f: f64,
    pub v_xx: f64,
}

impl TwoQubitHamiltonian {
    pub fn new(omega0: f64, omega1: f64, omega2: f64, v_f: f64, v_xx: f64) -> Self {
        Self { omega0, omega1, omega2, v_f, v_xx }
    }

    /// Δ₀ = ω₁ − ω₂.
    pub fn delta0(&self) -> f64 {
        self.omega1 - self.omega2
    }

    /// Second-order shift δ = V_F²/Δ₀; zero without coupling, undefined on resonance.
    pub fn delta_shift(&self) -> Option<f64> {
        if self.v_f == 0.0 {
            Some(0.0)
        } else if self.delta0() == 0.0 {
            None
        } else {
            Some(self.v_f * self.v_f / self.delta0())
        }
    }

    /// Carrier of the |10⟩ → |11⟩ transition, ω₂ + V_XX − δ.
    pub fn epsilon12(&self) -> Option<f64> {
        self.delta_shift().map(|d| self.omega2 + self.v_xx - d)
    }

    /// Carrier of the |01⟩ → |11⟩ transition, ω₁ + V_XX + δ.
    pub fn epsilon21(&self) -> Option<f64> {
        self.delta_shift().map(|d| self.omega1 + self.v_xx + d)
    }

    pub fn diagonal(&self) -> [f64; 4] {
        [
            self.omega0,
            self.omega0 + self.omega2,
            self.omega0 + self.omega1,
            self.omega0 + self.omega1 + self.omega2 + self.v_xx,
        ]
    }

    pub fn matrix(&self) -> CMat4 {
        let mut h = cmat_zero();
        for (i, e) in self.diagonal().into_iter().enumerate() {
            h[i][i] = Complex64::new(e, 0.0);
        }
        h[1][2] = Complex64::new(self.v_f, 0.0);
        h[2][1] = Complex64::new(self.v_f, 0.0);
        h
    }
}

/// Closed-form eigensystem of [`TwoQubitHamiltonian`].
///
/// `vectors` are ordered Ψ00, Ψ01, Ψ10, Ψ11 with Ψ01 = c1|10⟩ + c2|01⟩ and
/// Ψ10 = c2|10⟩ − c1|01⟩ (c2 carries the sign of V_F/Δ₀). `c1` is the large
/// component and `c2` the mixing amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    /// A = √(1 + 4(V_F/Δ₀)²); infinite on resonance with nonzero coupling.
    pub a: f64,
    pub c1: f64,
    pub c2: f64,
    pub e00: f64,
    pub e01: f64,
    pub e10: f64,
    pub e11: f64,
    pub vectors: [[f64; 4]; 4],
}

impl EigenSystem {
    pub fn energies(&self) -> [f64; 4] {
        [self.e00, self.e01, self.e10, self.e11]
    }

    /// Mixing amplitude, min(c1, c2).
    pub fn c_mix(&self) -> f64 {
        self.c1.min(self.c2)
    }
}

pub fn eigensystem(h: &TwoQubitHamiltonian) -> EigenSystem {
    let delta = h.delta0();
    let v = h.v_f;
    let e00 = h.omega0;
    let e11 = h.diagonal()[3];
    let base = h.omega0 + h.omega1;

    let (a, c1, c2, sign, e01, e10) = if delta != 0.0 {
        let r = v / delta;
        let a = (1.0 + 4.0 * r * r).sqrt();
        // A − 1 without cancellation for small |r|.
        let am1 = 4.0 * r * r / (1.0 + a);
        let c1 = ((2.0 + am1) / (2.0 * a)).sqrt();
        let c2 = (am1 / (2.0 * a)).sqrt();
        let sign = if v * delta < 0.0 { -1.0 } else { 1.0 };
        (a, c1, c2, sign, base + 0.5 * delta * am1, h.omega0 + h.omega2 - 0.5 * delta * am1)
    } else if v != 0.0 {
        let sign = v.signum();
        (f64::INFINITY, FRAC_1_SQRT_2, FRAC_1_SQRT_2, sign, base + v.abs(), base - v.abs())
    } else {
        (1.0, 1.0, 0.0, 1.0, base, base)
    };

    // Amplitudes in basis order (|00⟩, |01⟩, |10⟩, |11⟩).
    let vectors = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, sign * c2, c1, 0.0],
        [0.0, -c1, sign * c2, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ];
    EigenSystem { a, c1, c2, e00, e01, e10, e11, vectors }
}

/// Mixing amplitude √((A−1)/2A) of the one-exciton eigenstates.
///
/// Tends to |V_F/Δ₀| for weak coupling and to 1/√2 on resonance.
pub fn mixing_coefficient(v_f: f64, delta0: f64) -> Result<f64, DynamicsError> {
    if v_f == 0.0 && delta0 == 0.0 {
        return Err(DynamicsError::UndefinedMixing);
    }
    if delta0 == 0.0 {
        return Ok(FRAC_1_SQRT_2);
    }
    let r = v_f / delta0;
    let a = (1.0 + 4.0 * r * r).sqrt();
    let am1 = 4.0 * r * r / (1.0 + a);
    Ok((am1 / (2.0 * a)).sqrt())
}
