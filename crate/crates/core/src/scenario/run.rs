use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::config::{Kind, Protocol, Scenario};
use super::figures::run_figure;
use super::sweep::{cartesian, parameter};
use super::table::{Cell, ResultTable, RowError};
use super::ScenarioError;
use crate::coupling::{build_coupling_set, transfer_time, CouplingError};
use crate::dynamics::{
    bell_via_biexciton, bell_via_forster, biexciton_scheme_fidelity, cnot12, concurrence,
    default_rabi, dfs_dephasing_check, eigensystem, evolve_free, mixing_coefficient, DynamicsError,
    TwoQubitHamiltonian, TwoQubitState,
};
use crate::envelope::{solve_exciton, EnvelopeError};
use crate::units;

impl From<EnvelopeError> for RowError {
    fn from(e: EnvelopeError) -> Self {
        let sentinel = if matches!(e, EnvelopeError::Unbound { .. }) { "unbound" } else { "error" };
        RowError { sentinel, message: e.to_string() }
    }
}

impl From<CouplingError> for RowError {
    fn from(e: CouplingError) -> Self {
        match e {
            CouplingError::Envelope(inner) => inner.into(),
            other => RowError { sentinel: "error", message: other.to_string() },
        }
    }
}

impl From<DynamicsError> for RowError {
    fn from(e: DynamicsError) -> Self {
        RowError { sentinel: "error", message: e.to_string() }
    }
}

/// Header lines shared by every table: tool version, scenario digest and the
/// constants the numbers depend on.
pub fn standard_metadata(s: &Scenario) -> Vec<String> {
    let digest = Sha256::digest(s.to_toml().as_bytes());
    vec![
        format!("excitonq {}", env!("CARGO_PKG_VERSION")),
        format!("scenario_sha256 {digest:x}"),
        format!(
            "constants e2_over_4pi_eps0_mev_nm={} hbar_mev_ps={} h_mev_ps={} hbar2_over_2m0_mev_nm2={} field_mev_per_kv_per_cm_nm={}",
            units::COULOMB_K_E2,
            units::HBAR,
            units::PLANCK_H,
            units::HBAR2_OVER_2M0,
            units::FIELD_ENERGY_PER_NM
        ),
    ]
}

type RowResult = Result<Vec<Cell>, RowError>;

const SOLVE_COLUMNS: [&str; 7] = [
    "electron_energy_mev",
    "hole_energy_mev",
    "exciton_energy_mev",
    "dipole_x_e_nm",
    "dipole_y_e_nm",
    "dipole_z_e_nm",
    "overlap_dimless",
];

fn solve_row(s: &Scenario) -> RowResult {
    let dot = s.dot_i.as_ref().expect("validated").spec();
    let ex = solve_exciton(&dot, s.field(), &s.basis.spec())?;
    let p = ex.dipole();
    Ok(vec![
        ex.electron.energy().into(),
        ex.hole.energy().into(),
        ex.energy().into(),
        p[0].into(),
        p[1].into(),
        p[2].into(),
        ex.overlap().into(),
    ])
}

const COUPLING_COLUMNS: [&str; 14] = [
    "omega1_mev",
    "omega2_mev",
    "delta0_mev",
    "v_xx_mev",
    "v_f_mev",
    "delta_shift_mev",
    "c_mix_dimless",
    "overlap_i_dimless",
    "overlap_ii_dimless",
    "dipole_i_x_e_nm",
    "dipole_ii_x_e_nm",
    "transfer_period_ps",
    "half_oscillation_ps",
    "epsilon12_mev",
];

fn couplings_row(s: &Scenario) -> RowResult {
    let pair = s.pair.as_ref().expect("validated");
    let set = build_coupling_set(
        &s.dot_i.as_ref().expect("validated").spec(),
        &s.dot_ii.as_ref().expect("validated").spec(),
        &pair.geometry(),
        s.field(),
        &pair.atomic_dipole_i_e_nm.unwrap_or_default(),
        &pair.atomic_dipole_ii_e_nm.unwrap_or_default(),
        &s.basis.spec(),
    )?;
    let tt = transfer_time(set.v_f).ok();
    let eps12 = set.delta_shift.map(|d| set.omega2 + set.v_xx - d);
    Ok(vec![
        set.omega1.into(),
        set.omega2.into(),
        set.delta0.into(),
        set.v_xx.into(),
        set.v_f.into(),
        set.delta_shift.into(),
        set.c_mix.into(),
        set.overlap_i.into(),
        set.overlap_ii.into(),
        set.dipole_i[0].into(),
        set.dipole_ii[0].into(),
        tt.map(|t| t.period).into(),
        tt.map(|t| t.half_oscillation).into(),
        eps12.into(),
    ])
}

fn hamiltonian(s: &Scenario) -> Result<TwoQubitHamiltonian, RowError> {
    let d = s.dynamics.as_ref().expect("validated");
    let omega0 = d.omega0_mev.unwrap_or(0.0);
    if d.from_dots == Some(true) {
        let pair = s.pair.as_ref().expect("validated");
        let set = build_coupling_set(
            &s.dot_i.as_ref().expect("validated").spec(),
            &s.dot_ii.as_ref().expect("validated").spec(),
            &pair.geometry(),
            s.field(),
            &pair.atomic_dipole_i_e_nm.unwrap_or_default(),
            &pair.atomic_dipole_ii_e_nm.unwrap_or_default(),
            &s.basis.spec(),
        )?;
        return Ok(set.hamiltonian(omega0));
    }
    Ok(TwoQubitHamiltonian::new(
        omega0,
        d.omega1_mev.unwrap_or(0.0),
        d.omega2_mev.unwrap_or(0.0),
        d.v_f_mev.unwrap_or(0.0),
        d.v_xx_mev.unwrap_or(0.0),
    ))
}

pub(crate) fn dynamics_columns(p: Protocol) -> &'static [&'static str] {
    match p {
        Protocol::Eigensystem => &[
            "e00_mev", "e01_mev", "e10_mev", "e11_mev", "a_dimless", "c1_dimless", "c2_dimless",
        ],
        Protocol::Free => &["p00_dimless", "p01_dimless", "p10_dimless", "p11_dimless", "concurrence_dimless"],
        Protocol::Cnot12 => &[
            "carrier_mev",
            "rabi_mev",
            "duration_ps",
            "fidelity_dimless",
            "p10_to_11_dimless",
            "p00_to_00_dimless",
        ],
        Protocol::BellForster => &["t_star_ps", "concurrence_dimless"],
        Protocol::BellBiexciton => &["rabi_mev", "duration_ps", "fidelity_dimless", "concurrence_dimless"],
        Protocol::SchemeFidelity => &["c_mix_dimless", "fidelity_dimless"],
        Protocol::DfsCheck => &["fidelity_dimless"],
    }
}

fn dynamics_row(s: &Scenario) -> Result<(Vec<Cell>, Option<String>), RowError> {
    let d = s.dynamics.as_ref().expect("validated");
    let h = hamiltonian(s)?;
    let rabi = || d.rabi_mev.unwrap_or_else(|| default_rabi(&h));
    let initial = || TwoQubitState::from_real(d.initial.expect("filled"));
    Ok(match d.protocol {
        Protocol::Eigensystem => {
            let es = eigensystem(&h);
            let c = vec![es.e00, es.e01, es.e10, es.e11, es.a, es.c1, es.c2];
            (c.into_iter().map(Cell::from).collect(), None)
        }
        Protocol::Free => {
            let out = evolve_free(&initial()?, &h, d.time_ps.expect("validated"))?;
            let p = out.populations();
            let c = vec![p[0], p[1], p[2], p[3], concurrence(&out)?];
            (c.into_iter().map(Cell::from).collect(), None)
        }
        Protocol::Cnot12 => {
            let rep = cnot12(&h, rabi())?;
            let c = vec![
                rep.pulse.carrier,
                rep.pulse.rabi,
                rep.pulse.duration,
                rep.fidelity,
                rep.populations[0b10][0b11],
                rep.populations[0b00][0b00],
            ];
            (c.into_iter().map(Cell::from).collect(), rep.warning)
        }
        Protocol::BellForster => {
            let r = bell_via_forster(&h)?;
            (vec![r.t_star.into(), r.concurrence.into()], r.warning)
        }
        Protocol::BellBiexciton => {
            let r = bell_via_biexciton(&h, rabi(), d.sign.expect("filled").into())?;
            let total = r.pulses[0].duration + r.pulses[1].duration;
            (vec![rabi().into(), total.into(), r.fidelity.into(), r.concurrence.into()], r.warning)
        }
        Protocol::SchemeFidelity => {
            let c = mixing_coefficient(h.v_f, h.delta0())?;
            (vec![c.into(), biexciton_scheme_fidelity(h.v_f, h.delta0())?.into()], None)
        }
        Protocol::DfsCheck => {
            let f = dfs_dephasing_check(&initial()?, d.phi_rad.expect("validated"))?;
            (vec![f.into()], None)
        }
    })
}

/// Runs a validated scenario over its sweep grid.
///
/// Grid points are evaluated in parallel and written in grid order (first
/// axis slowest). A physics failure at one point fills that row with a
/// sentinel and leaves the others untouched.
pub fn run_scenario(s: &Scenario) -> Result<ResultTable, ScenarioError> {
    s.validate()?;
    if s.kind == Kind::Figure {
        return run_figure(s);
    }
    let params: Vec<_> = s
        .sweep
        .iter()
        .map(|a| parameter(&a.name).ok_or_else(|| ScenarioError::Validation(format!("unknown sweep parameter `{}`", a.name))))
        .collect::<Result<_, _>>()?;
    let param_cols: Vec<&str> = params.iter().map(|p| p.column).collect();
    let value_cols: &[&str] = match s.kind {
        Kind::Solve => &SOLVE_COLUMNS,
        Kind::Couplings => &COUPLING_COLUMNS,
        Kind::Dynamics => dynamics_columns(s.dynamics.as_ref().expect("validated").protocol),
        Kind::Figure => unreachable!(),
    };
    let mut table = ResultTable::new(&param_cols, value_cols);
    table.metadata = standard_metadata(s);
    table.metadata.push(format!("kind {}", s.kind.name()));

    let axes: Vec<Vec<f64>> = s.sweep.iter().map(|a| a.values()).collect();
    let points = cartesian(&axes);
    let results: Vec<(RowResult, Option<String>)> = points
        .par_iter()
        .map(|point| {
            let mut local = s.clone();
            for (p, &v) in params.iter().zip(point) {
                local = p.applied(&local, v);
            }
            if let Err(e) = local.validate() {
                return (Err(RowError { sentinel: "error", message: e.to_string() }), None);
            }
            match s.kind {
                Kind::Solve => (solve_row(&local), None),
                Kind::Couplings => (couplings_row(&local), None),
                Kind::Dynamics => match dynamics_row(&local) {
                    Ok((cells, warn)) => (Ok(cells), warn),
                    Err(e) => (Err(e), None),
                },
                Kind::Figure => unreachable!(),
            }
        })
        .collect();
    for (i, (point, (row, warn))) in points.into_iter().zip(results).enumerate() {
        if let Some(w) = warn {
            table.metadata.push(format!("warning row {i}: {w}"));
        }
        if let Err(e) = &row {
            table.metadata.push(format!("row {i} {}: {}", e.sentinel, e.message));
        }
        table.rows.push((point, row));
    }
    Ok(table)
}
