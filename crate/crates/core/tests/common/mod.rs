//! Independent reference calculations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

pub const HBAR2_OVER_2M0: f64 = 38.0998;

/// Bisection root of a sign-changing function on [a, b].
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Ground energy (meV above the well bottom) of a symmetric finite square well
/// from the even-parity matching condition u·tan u = √(u0² − u²).
pub fn finite_well_ground(mass: f64, depth: f64, width: f64) -> f64 {
    let u0 = 0.5 * width * (mass * depth / HBAR2_OVER_2M0).sqrt();
    let hi = u0.min(PI / 2.0) * (1.0 - 1e-15);
    let u = bisect(|u| u * u.tan() - (u0 * u0 - u * u).sqrt(), 1e-300_f64.max(hi * 1e-12), hi);
    HBAR2_OVER_2M0 / mass * (2.0 * u / width).powi(2)
}

/// First excited (odd) state, if bound: −u·cot u = √(u0² − u²).
pub fn finite_well_first_odd(mass: f64, depth: f64, width: f64) -> Option<f64> {
    let u0 = 0.5 * width * (mass * depth / HBAR2_OVER_2M0).sqrt();
    if u0 <= PI / 2.0 {
        return None;
    }
    let lo = PI / 2.0 * (1.0 + 1e-15);
    let hi = u0.min(PI) * (1.0 - 1e-15);
    let u = bisect(|u| -u / u.tan() - (u0 * u0 - u * u).sqrt(), lo, hi);
    Some(HBAR2_OVER_2M0 / mass * (2.0 * u / width).powi(2))
}

pub fn infinite_well_ground(mass: f64, width: f64) -> f64 {
    HBAR2_OVER_2M0 / mass * (PI / width).powi(2)
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// ⟨1|u|2⟩ for an infinite well of width 2x by direct quadrature.
pub fn kp_dipole_quadrature(x: f64) -> f64 {
    let l = 2.0 * x;
    let f = |u: f64| (2.0 / l) * (PI * u / l).sin() * (u - x) * (2.0 * PI * u / l).sin();
    simpson(f, 0.0, l, 4000).abs()
}

/// Two-level resonant Rabi population of the upper level after time t.
pub fn rabi_upper_population(rabi: f64, detuning: f64, t: f64) -> f64 {
    let hbar = 0.658_211_9;
    let w = (rabi * rabi + detuning * detuning).sqrt();
    (rabi / w).powi(2) * (w * t / (2.0 * hbar)).sin().powi(2)
}

/// Concurrence 2|ad − bc| written out in real arithmetic.
pub fn concurrence_ref(re: [f64; 4], im: [f64; 4]) -> f64 {
    let (ar, ai) = (re[0] * re[3] - im[0] * im[3], re[0] * im[3] + im[0] * re[3]);
    let (br, bi) = (re[1] * re[2] - im[1] * im[2], re[1] * im[2] + im[1] * re[2]);
    2.0 * ((ar - br).powi(2) + (ai - bi).powi(2)).sqrt()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
