mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use common::{concurrence_ref, rabi_upper_population};
use excitonq::dynamics::{
    bell_via_biexciton, bell_via_forster, biexciton_scheme_fidelity, cnot12, collective_dephasing, concurrence,
    default_rabi, dfs_dephasing_check, eigensystem, evolve_driven, evolve_free, mixing_coefficient, BellSign,
    DrivePattern, DynamicsError, PulseSpec, TwoQubitHamiltonian, TwoQubitState,
};
use excitonq::linalg::{eigh, Matrix};
use excitonq::units::HBAR;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn real_matrix(h: &TwoQubitHamiltonian) -> Matrix {
    let m = h.matrix();
    Matrix::from_rows(&m.iter().map(|r| r.iter().map(|z| z.re).collect()).collect::<Vec<_>>()).unwrap()
}

fn state(re: [f64; 4], im: [f64; 4]) -> TwoQubitState {
    TwoQubitState::normalized(std::array::from_fn(|k| Complex64::new(re[k], im[k]))).unwrap()
}

#[test]
fn closed_form_eigensystem_matches_numerics() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let h = TwoQubitHamiltonian::new(
            rng.gen_range(-50.0..50.0),
            rng.gen_range(500.0..3000.0),
            rng.gen_range(500.0..3000.0),
            rng.gen_range(-20.0..20.0),
            rng.gen_range(-150.0..150.0),
        );
        let m = real_matrix(&h);
        let scale = m.max_abs();
        let num = eigh(&m).unwrap();
        let es = eigensystem(&h);
        let mut closed = es.energies();
        closed.sort_by(f64::total_cmp);
        for (a, b) in closed.iter().zip(&num.values) {
            assert!((a - b).abs() <= 1e-12 * scale, "{a} vs {b}");
        }
        for (e, v) in es.energies().iter().zip(&es.vectors) {
            let hv = m.mul_vec(v);
            let resid = hv.iter().zip(v).map(|(x, y)| (x - e * y).abs()).fold(0.0, f64::max);
            assert!(resid <= 1e-12 * scale, "residual {resid}");
            let k = num.values.iter().position(|x| (x - e).abs() <= 1e-12 * scale).unwrap();
            let ov: f64 = v.iter().zip(&num.vectors[k]).map(|(x, y)| x * y).sum();
            assert!((ov.abs() - 1.0).abs() < 1e-12);
        }
        assert!((es.c1 * es.c1 + es.c2 * es.c2 - 1.0).abs() < 1e-12);
    }
}

#[test]
fn mixing_limits() {
    assert_eq!(mixing_coefficient(0.0, 0.0), Err(DynamicsError::UndefinedMixing));
    assert_eq!(mixing_coefficient(1.0, 0.0).unwrap(), FRAC_1_SQRT_2);
    let small = mixing_coefficient(1e-4, 1.0).unwrap();
    assert!((small - 1e-4).abs() < 1e-11);
    let es = eigensystem(&TwoQubitHamiltonian::new(0.0, 1000.0, 1000.0, 2.0, 10.0));
    assert!((es.c1 - FRAC_1_SQRT_2).abs() < 1e-15 && (es.c2 - FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((es.e01 - es.e10 - 4.0).abs() < 1e-12);
}

#[test]
fn forster_bell_reaches_full_concurrence() {
    let h = TwoQubitHamiltonian::new(0.0, 1200.0, 1200.0, 0.6, 0.0);
    let b = bell_via_forster(&h).unwrap();
    assert!((b.concurrence - 1.0).abs() < 1e-9);
    assert!(b.warning.is_none());
    assert!((b.t_star - PI * HBAR / 2.4).abs() < 1e-15);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let t = 4.0 * b.t_star * k as f64 / 99.0;
        let c = concurrence(&evolve_free(&TwoQubitState::basis(0b10), &h, t).unwrap()).unwrap();
        worst = worst.max((c - (2.0 * h.v_f * t / HBAR).sin().abs()).abs());
    }
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn forster_bell_warns_off_resonance() {
    let h = TwoQubitHamiltonian::new(0.0, 1201.0, 1200.0, 0.6, 0.0);
    assert!(bell_via_forster(&h).unwrap().warning.is_some());
    let none = TwoQubitHamiltonian::new(0.0, 1200.0, 1200.0, 0.0, 0.0);
    assert_eq!(bell_via_forster(&none).unwrap_err(), DynamicsError::NoCoupling);
}

#[test]
fn cnot_truth_table() {
    let h = TwoQubitHamiltonian::new(0.0, 1500.0, 1000.0, 0.0, 120.0);
    let r = cnot12(&h, 6.0).unwrap();
    assert!(r.populations[2][3] >= 0.999, "{:?}", r.populations[2]);
    assert!(r.populations[3][2] >= 0.999);
    assert!(r.populations[0][0] >= 0.99);
    assert!(r.populations[1][1] >= 0.99);
    assert!(r.fidelity > 0.99);
    assert!(r.warning.is_none());
    assert_eq!(default_rabi(&h), 6.0);
}

#[test]
fn cnot_degrades_with_strong_drive() {
    let h = TwoQubitHamiltonian::new(0.0, 1500.0, 1000.0, 0.0, 120.0);
    let gentle = cnot12(&h, 6.0).unwrap().fidelity;
    let harsh = cnot12(&h, 120.0 / 8f64.sqrt()).unwrap().fidelity;
    assert!(harsh < gentle && harsh < 0.97, "{harsh}");
}

#[test]
fn cnot_rejects_unusable_registers() {
    let flat = TwoQubitHamiltonian::new(0.0, 1500.0, 1000.0, 0.0, 0.0);
    assert_eq!(cnot12(&flat, 1.0).unwrap_err(), DynamicsError::NoBiexcitonShift);
    let mixed = TwoQubitHamiltonian::new(0.0, 1001.0, 1000.0, 5.0, 120.0);
    assert!(matches!(cnot12(&mixed, 6.0).unwrap_err(), DynamicsError::MixingTooLarge(_)));
    let warned = TwoQubitHamiltonian::new(0.0, 1010.0, 1000.0, 1.5, 120.0);
    assert!(cnot12(&warned, 6.0).unwrap().warning.is_some());
}

#[test]
fn biexciton_bell_both_signs() {
    let h = TwoQubitHamiltonian::new(0.0, 1500.0, 1000.0, 0.0, 120.0);
    for sign in [BellSign::Plus, BellSign::Minus] {
        let b = bell_via_biexciton(&h, 6.0, sign).unwrap();
        assert!(b.concurrence >= 0.96, "{sign:?}: {}", b.concurrence);
        assert!(b.fidelity >= 0.96, "{sign:?}: {}", b.fidelity);
        assert!((b.pulses[1].start - b.pulses[0].end()).abs() < 1e-15);
    }
}

#[test]
fn scheme_fidelity_at_one_tenth() {
    let f = biexciton_scheme_fidelity(0.1, 1.0).unwrap();
    assert!((f - 0.990).abs() < 1e-3, "{f}");
    let c = mixing_coefficient(0.1, 1.0).unwrap();
    assert!((f - (1.0 - c * c)).abs() < 1e-15);
}

#[test]
fn dfs_contrast_state_dephases() {
    let ghz = TwoQubitState::from_real([FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).unwrap();
    for k in 0..50 {
        let phi = 2.0 * PI * k as f64 / 50.0;
        let f = ghz.fidelity(&collective_dephasing(&ghz, phi));
        assert!((f - phi.cos().powi(2)).abs() < 1e-12);
    }
    assert!(matches!(dfs_dephasing_check(&ghz, 0.3), Err(DynamicsError::SubspaceViolation(_))));
}

#[test]
fn resonant_drive_follows_rabi_formula() {
    let h = TwoQubitHamiltonian::new(0.0, 1500.0, 1000.0, 0.0, 120.0);
    let (rabi, detuning) = (2.0, 1.0);
    for duration in [0.2, 0.5, 0.9] {
        let pulse = PulseSpec::new(1500.0 + detuning, rabi, duration);
        let out = evolve_driven(&TwoQubitState::basis(0), &h, &pulse, &DrivePattern::qubit1_only()).unwrap();
        let want = rabi_upper_population(rabi, detuning, duration);
        assert!((out.populations()[2] - want).abs() < 1e-6, "{} vs {want}", out.populations()[2]);
    }
}

#[test]
fn invalid_pulses_and_states() {
    let h = TwoQubitHamiltonian::new(0.0, 1500.0, 1000.0, 0.0, 120.0);
    let s = TwoQubitState::basis(0);
    for p in [PulseSpec::new(1500.0, 1.0, -1.0), PulseSpec::new(1500.0, f64::NAN, 1.0)] {
        assert!(matches!(evolve_driven(&s, &h, &p, &DrivePattern::uniform()), Err(DynamicsError::InvalidPulse(_))));
    }
    let long = PulseSpec::new(1500.0, 1.0, 1e6);
    assert!(matches!(
        evolve_driven(&s, &h, &long, &DrivePattern::uniform()),
        Err(DynamicsError::IntegrationResolution { .. })
    ));
    let z = Complex64::new(0.0, 0.0);
    assert!(matches!(TwoQubitState::new([Complex64::new(2.0, 0.0), z, z, z]), Err(DynamicsError::NotNormalized(_))));
}

fn amps() -> impl Strategy<Value = ([f64; 4], [f64; 4])> {
    ([-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0], [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0])
        .prop_filter("nonzero", |(r, i)| r.iter().chain(i).map(|x| x * x).sum::<f64>() > 1e-3)
}

proptest! {
    #[test]
    fn concurrence_matches_reference((re, im) in amps()) {
        let s = state(re, im);
        let a = s.amplitudes();
        let c = concurrence(&s).unwrap();
        prop_assert!((c - concurrence_ref(a.map(|z| z.re), a.map(|z| z.im)).min(1.0)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&c));
    }

    #[test]
    fn concurrence_ignores_local_phases((re, im) in amps(), a in 0.0f64..6.3, b in 0.0f64..6.3) {
        let s = state(re, im);
        let amp = s.amplitudes();
        // diag(1, e^{ib}) ⊗ diag(1, e^{ia}) on |q1 q2⟩.
        let ph = [0.0, a, b, a + b];
        let t = TwoQubitState::normalized(std::array::from_fn(|k| amp[k] * Complex64::from_polar(1.0, ph[k]))).unwrap();
        prop_assert!((concurrence(&s).unwrap() - concurrence(&t).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn free_evolution_is_unitary(
        (re, im) in amps(), d in -5.0f64..5.0, v in -3.0f64..3.0, vxx in -50.0f64..50.0, t in 0.0f64..50.0,
    ) {
        let h = TwoQubitHamiltonian::new(0.0, 1000.0 + d, 1000.0, v, vxx);
        let s = state(re, im);
        let out = evolve_free(&s, &h, t).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        let back = evolve_free(&out, &h, -t).unwrap();
        prop_assert!((back.fidelity(&s) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn dfs_states_are_immune(a in -1.0f64..1.0, b in -1.0f64..1.0, pa in 0.0f64..6.3, phi in 0.0f64..6.3) {
        prop_assume!(a * a + b * b > 1e-3);
        let z = Complex64::new(0.0, 0.0);
        let s = TwoQubitState::normalized([z, Complex64::new(a, 0.0), Complex64::from_polar(b, pa), z]).unwrap();
        prop_assert!((dfs_dephasing_check(&s, phi).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixing_coefficient_bounded(v in -10.0f64..10.0, d in -10.0f64..10.0) {
        prop_assume!(v != 0.0 || d != 0.0);
        let c = mixing_coefficient(v, d).unwrap();
        prop_assert!((0.0..=FRAC_1_SQRT_2 + 1e-15).contains(&c));
    }
}
