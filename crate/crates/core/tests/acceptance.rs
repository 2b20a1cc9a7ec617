//! Acceptance checks, one PASS/FAIL line each. Exits non-zero if any fails.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::process::{Command, ExitCode};

use common::{finite_well_ground, infinite_well_ground, kp_dipole_quadrature, rel_err};
use excitonq::coupling::{
    build_coupling_set, kp_atomic_dipole, transfer_time, vf_dipole, vxx_point_dipole, PairGeometry,
};
use excitonq::dynamics::{
    bell_via_biexciton, bell_via_forster, biexciton_scheme_fidelity, cnot12, collective_dephasing, concurrence,
    dfs_dephasing_check, eigensystem, evolve_free, BellSign, TwoQubitHamiltonian, TwoQubitState,
};
use excitonq::envelope::{exciton_dipole, solve_axis, solve_exciton, BasisSpec, DotSpec, EnvelopeError, ParticleSpec};
use excitonq::linalg::{eigh, Matrix};
use excitonq::units::HBAR;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Check {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: String) -> Check {
    Check { ok, detail }
}

fn biexciton_shift() -> Check {
    let dot = DotSpec::flat(10.0, 8.0, 2.0);
    let geom = PairGeometry::along(1, 5.0);
    let full = build_coupling_set(&dot, &dot, &geom, 100.0, &[0.0; 3], &[0.0; 3], &BasisSpec::default())
        .map(|s| s.v_xx);
    let p = [10.0, 0.0, 0.0];
    let hand = vxx_point_dipole(&p, &p, &geom).unwrap();
    let full_ok = matches!(full, Ok(v) if (96.0..=144.0).contains(&v));
    let hand_ok = rel_err(hand, 115.2) < 1e-3;
    let solved = match full {
        Ok(v) => format!("{v:.3} meV"),
        Err(e) => e.to_string(),
    };
    check(
        full_ok && hand_ok,
        format!("solved V_XX = {solved} (want 96..144), point dipole 10 e nm -> {hand:.4} meV (want 115.2 +- 0.1%)"),
    )
}

fn forster_range() -> Check {
    let geom = PairGeometry::along(0, 5.0);
    let v = |d: f64| vf_dipole(&[d, 0.0, 0.0], &[d, 0.0, 0.0], 1.0, 1.0, &geom).unwrap().magnitude;
    let (lo, hi) = (v(0.09), v(0.52));
    let ok = rel_err(lo, 0.0187) < 0.05 && rel_err(hi, 0.623) < 0.05 && rel_err(lo, 0.02) < 0.08 && rel_err(hi, 0.6) < 0.05;
    check(ok, format!("|V_F| = {lo:.5} and {hi:.4} meV"))
}

fn molecular_forster() -> Check {
    let p = [0.17, 0.0, 0.0];
    let v = vf_dipole(&p, &p, 1.0, 1.0, &PairGeometry::along(0, 1.0)).unwrap().magnitude;
    check((v - 8.32).abs() <= 0.05, format!("|V_F| = {v:.4} meV"))
}

fn transfer_times() -> Check {
    let want = [(0.02, 206.8), (0.6, 6.893), (8.32, 0.497)];
    let got: Vec<f64> = want.iter().map(|(v, _)| transfer_time(*v).unwrap().period).collect();
    let ok = want.iter().zip(&got).all(|((_, w), g)| rel_err(*g, *w) < 5e-3);
    check(ok, format!("h/|V_F| = {:.2} ps, {:.4} ps, {:.4} ps", got[0], got[1], got[2]))
}

fn kronig_penney() -> Check {
    let geom = PairGeometry::along(0, 5.0);
    let mut worst_int: f64 = 0.0;
    let mut ratios = Vec::new();
    for i in 0..=95 {
        let x = 0.05 + 0.01 * i as f64;
        let d = kp_atomic_dipole(x).unwrap();
        worst_int = worst_int.max(rel_err(d, kp_dipole_quadrature(x)));
        let v = vf_dipole(&[d, 0.0, 0.0], &[d, 0.0, 0.0], 1.0, 1.0, &geom).unwrap().magnitude;
        ratios.push(v / (x * x));
    }
    let spread = ratios.iter().map(|r| rel_err(*r, ratios[0])).fold(0.0, f64::max);
    check(
        worst_int < 1e-6 && spread < 1e-9,
        format!("quadrature rel err {worst_int:.2e}, V_F/x^2 spread {spread:.2e}"),
    )
}

fn eigensystem_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut e_err, mut v_err, mut norm_err): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..1000 {
        let h = TwoQubitHamiltonian::new(
            rng.gen_range(-100.0..100.0),
            rng.gen_range(200.0..3000.0),
            rng.gen_range(200.0..3000.0),
            rng.gen_range(-30.0..30.0),
            rng.gen_range(-200.0..200.0),
        );
        let cm = h.matrix();
        let rows: Vec<Vec<f64>> = cm.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
        let m = Matrix::from_rows(&rows).unwrap();
        let scale = m.max_abs();
        let num = eigh(&m).unwrap();
        let es = eigensystem(&h);
        let mut closed = es.energies();
        closed.sort_by(f64::total_cmp);
        for (a, b) in closed.iter().zip(&num.values) {
            e_err = e_err.max((a - b).abs() / scale);
        }
        for (e, v) in es.energies().iter().zip(&es.vectors) {
            let k = (0..4).min_by(|&p, &q| (num.values[p] - e).abs().total_cmp(&(num.values[q] - e).abs())).unwrap();
            let ov: f64 = v.iter().zip(&num.vectors[k]).map(|(x, y)| x * y).sum();
            v_err = v_err.max((ov.abs() - 1.0).abs());
        }
        norm_err = norm_err.max((es.c1 * es.c1 + es.c2 * es.c2 - 1.0).abs());
    }
    check(
        e_err < 1e-12 && v_err < 1e-12 && norm_err < 1e-12,
        format!("energy {e_err:.1e}, vector {v_err:.1e}, c1^2+c2^2 {norm_err:.1e} over 1000 draws"),
    )
}

fn forster_bell() -> Check {
    let h = TwoQubitHamiltonian::new(0.0, 1200.0, 1200.0, 0.6, 0.0);
    let b = bell_via_forster(&h).unwrap();
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let t = 2.0 * b.t_star * k as f64 / 99.0;
        let c = concurrence(&evolve_free(&TwoQubitState::basis(0b10), &h, t).unwrap()).unwrap();
        worst = worst.max((c - (2.0 * h.v_f * t / HBAR).sin().abs()).abs());
    }
    let c_err = (b.concurrence - 1.0).abs();
    check(c_err < 1e-9 && worst < 1e-9, format!("C(t*) error {c_err:.1e}, C(t) vs |sin 2V_F t/hbar| {worst:.1e}"))
}

fn cnot_protocol() -> Check {
    let h = TwoQubitHamiltonian::new(0.0, 1500.0, 1000.0, 0.0, 120.0);
    let r = cnot12(&h, 6.0).unwrap();
    let bell = bell_via_biexciton(&h, 6.0, BellSign::Plus).unwrap();
    let (flip, stay) = (r.populations[2][3], r.populations[0][0]);
    check(
        flip >= 0.999 && stay >= 0.99 && bell.concurrence >= 0.96,
        format!("P(10->11) = {flip:.6}, P(00->00) = {stay:.6}, Bell concurrence {:.6}", bell.concurrence),
    )
}

fn fidelity_bound() -> Check {
    let f = biexciton_scheme_fidelity(0.1, 1.0).unwrap();
    check((f - 0.990).abs() <= 1e-3, format!("1 - c^2 = {f:.6}"))
}

fn dfs_immunity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let z = Complex64::new(0.0, 0.0);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let s = TwoQubitState::normalized([z, a, b, z]).unwrap();
        let phi = rng.gen_range(0.0..2.0 * PI);
        worst = worst.max((dfs_dephasing_check(&s, phi).unwrap() - 1.0).abs());
    }
    let ghz = TwoQubitState::from_real([FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).unwrap();
    let mut contrast: f64 = 0.0;
    for k in 0..100 {
        let phi = 2.0 * PI * k as f64 / 100.0;
        let f = ghz.fidelity(&collective_dephasing(&ghz, phi));
        contrast = contrast.max((f - phi.cos().powi(2)).abs());
    }
    check(worst < 1e-12 && contrast < 1e-12, format!("DFS fidelity error {worst:.1e}, contrast vs cos^2 {contrast:.1e}"))
}

fn envelope_oracles() -> Check {
    let basis = BasisSpec::default();
    let mut grid_err: f64 = 0.0;
    for i in 0..10 {
        let width = 1.0 + i as f64;
        for j in 0..10 {
            let depth = 100.0 + 100.0 * j as f64;
            let e = solve_axis(0.06, depth, width, 0.0, &basis).unwrap().ground_energy();
            grid_err = grid_err.max((e - finite_well_ground(0.06, depth, width)).abs());
        }
    }
    let deep = solve_axis(0.06, 1e6, 10.0, 0.0, &basis).unwrap().ground_energy();
    let inf_err = rel_err(deep, infinite_well_ground(0.06, 10.0));
    let dip = [DotSpec::cube(8.0), DotSpec::flat(10.0, 8.0, 2.0)]
        .iter()
        .map(|d| exciton_dipole(d, 0.0, &basis).unwrap().iter().fold(0.0f64, |m, x| m.max(x.abs())))
        .fold(0.0, f64::max);

    // Cube of edge a with equal electron and hole depths: bound iff 3·E₁(a) < V for both carriers.
    let mut mismatches = 0;
    for i in 0..20 {
        let a = 0.5 + 0.5 * i as f64;
        for j in 0..20 {
            let depth = 50.0 + 50.0 * j as f64;
            let (me, mh) = (0.06, 0.6);
            let oracle_bound = 3.0 * finite_well_ground(me, depth, a) < depth
                && 3.0 * finite_well_ground(mh, depth, a) < depth;
            let dot = DotSpec::cube(a).with_particles(ParticleSpec::new(me, depth), ParticleSpec::new(mh, depth));
            let solver_bound = match solve_exciton(&dot, 0.0, &basis) {
                Ok(_) => true,
                Err(EnvelopeError::Unbound { .. }) => false,
                Err(_) => !oracle_bound,
            };
            if solver_bound != oracle_bound {
                mismatches += 1;
            }
        }
    }
    check(
        grid_err < 0.1 && inf_err < 0.02 && dip < 1e-8 && mismatches == 0,
        format!(
            "finite well max err {grid_err:.4} meV, hard-wall limit {:.2}%, zero-field dipole {dip:.1e}, cut-off mismatches {mismatches}/400",
            100.0 * inf_err
        ),
    )
}

fn figure_csv(name: &str, dir: &std::path::Path, tag: &str) -> Result<String, String> {
    let out = dir.join(format!("{name}_{tag}.csv"));
    let o = Command::new(env!("CARGO_BIN_EXE_excitonq"))
        .args(["figure", name, "--out"])
        .arg(&out)
        .output()
        .map_err(|e| e.to_string())?;
    if !o.status.success() {
        return Err(format!("{name} exited with {:?}", o.status.code()));
    }
    std::fs::read_to_string(&out).map_err(|e| e.to_string())
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let k = header.iter().position(|h| *h == name).expect("column present");
    lines.map(|l| l.split(',').nth(k).and_then(|v| v.parse().ok()).unwrap_or(f64::NAN)).collect()
}

fn figure_sweeps() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let names = ["fig1c", "fig2b", "fig2c", "fig3a", "fig3b", "fig4a", "fig4b"];
    let mut problems = Vec::new();
    let mut csvs = std::collections::HashMap::new();
    for n in names {
        match (figure_csv(n, dir.path(), "a"), figure_csv(n, dir.path(), "b")) {
            (Ok(a), Ok(b)) => {
                if a != b {
                    problems.push(format!("{n} differs between runs"));
                }
                csvs.insert(n, a);
            }
            (Err(e), _) | (_, Err(e)) => problems.push(e),
        }
    }
    let mut asym = f64::NAN;
    if let Some(c) = csvs.get("fig1c") {
        let (c1, c2) = (column(c, "c1_dimless"), column(c, "c2_dimless"));
        asym = (c1.last().unwrap() - FRAC_1_SQRT_2).abs().max((c2.last().unwrap() - FRAC_1_SQRT_2).abs());
        if !(asym < 1e-3) {
            problems.push(format!("fig1c asymptote off by {asym:.2e}"));
        }
    }
    if let Some(c) = csvs.get("fig4a") {
        let (b, ratio, d) = (column(c, "b_nm"), column(c, "a_over_b_dimless"), column(c, "delta0_mev"));
        for i in 0..d.len() {
            if ratio[i] == 1.0 && d[i] != 0.0 {
                problems.push(format!("fig4a delta0 = {} at a/b = 1", d[i]));
            }
            if i > 0 && b[i] == b[i - 1] && (1.0..=2.0).contains(&ratio[i]) && !(d[i] > d[i - 1]) {
                problems.push(format!("fig4a not increasing at b = {}, a/b = {}", b[i], ratio[i]));
            }
        }
    }
    let ok = problems.is_empty();
    let detail = if ok {
        format!("7 figures byte-identical across two runs, fig1c asymptote error {asym:.2e}, fig4a monotone")
    } else {
        problems.join("; ")
    };
    check(ok, detail)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("biexciton shift", biexciton_shift),
        ("forster range", forster_range),
        ("molecular-scale forster", molecular_forster),
        ("transfer times", transfer_times),
        ("kronig-penney dipole", kronig_penney),
        ("eigensystem equivalence", eigensystem_equivalence),
        ("bell via forster", forster_bell),
        ("cnot protocol", cnot_protocol),
        ("fidelity bound", fidelity_bound),
        ("dfs immunity", dfs_immunity),
        ("envelope oracles", envelope_oracles),
        ("figure sweeps", figure_sweeps),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let c = f();
        if !c.ok {
            failed += 1;
        }
        println!("{} {:>2} {name}: {}", if c.ok { "PASS" } else { "FAIL" }, i + 1, c.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
