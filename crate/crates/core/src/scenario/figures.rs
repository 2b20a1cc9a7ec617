//! Canonical sweeps behind the published figures. Every geometry choice lives
//! in [`FigureSettings`] so it can be overridden from a scenario file, and the
//! mapping actually used is written into the CSV header.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{FigureName, ParticleConfig, Scenario};
use super::run::standard_metadata;
use super::sweep::{cartesian, grid, Spacing};
use super::table::{Cell, PlotStyle, ResultTable, RowError};
use super::ScenarioError;
use crate::coupling::{kp_atomic_dipole, vf_dipole, vxx_point_dipole, PairGeometry};
use crate::dynamics::{eigensystem, mixing_coefficient, TwoQubitHamiltonian};
use crate::envelope::{solve_exciton, BasisSpec, DotSpec};
use crate::units::DEFAULT_EPSILON_R;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig1c {
    pub ratio_start: f64,
    pub ratio_stop: f64,
    pub count: usize,
    /// ω₁/Δ₀ used for the energy columns.
    pub omega1_over_delta0: f64,
}

impl Default for Fig1c {
    fn default() -> Self {
        Self { ratio_start: 0.01, ratio_stop: 1000.0, count: 61, omega1_over_delta0: 20.0 }
    }
}

/// Field sweep over dots a × a × a/aspect with the field along an a edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DipoleSweep {
    pub sizes_nm: Vec<f64>,
    pub aspects: Vec<f64>,
    pub field_start_kv_per_cm: f64,
    pub field_stop_kv_per_cm: f64,
    pub field_count: usize,
}

impl Default for DipoleSweep {
    fn default() -> Self {
        Self {
            sizes_nm: vec![6.0, 8.0, 10.0, 12.0],
            aspects: vec![1.0, 5.0],
            field_start_kv_per_cm: 0.0,
            field_stop_kv_per_cm: 200.0,
            field_count: 11,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig3a {
    pub separation_start_nm: f64,
    pub separation_stop_nm: f64,
    pub count: usize,
}

impl Default for Fig3a {
    fn default() -> Self {
        Self { separation_start_nm: 0.5, separation_stop_nm: 10.0, count: 39 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig3b {
    pub size_start_nm: f64,
    pub size_stop_nm: f64,
    pub size_count: usize,
    pub depth_start_mev: f64,
    pub depth_stop_mev: f64,
    pub depth_count: usize,
}

impl Default for Fig3b {
    fn default() -> Self {
        Self {
            size_start_nm: 0.5,
            size_stop_nm: 10.0,
            size_count: 20,
            depth_start_mev: 50.0,
            depth_stop_mev: 1000.0,
            depth_count: 20,
        }
    }
}

/// Cube pairs: dot I has edge b, dot II edge a = ratio·b.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RatioSweep {
    pub base_sizes_nm: Vec<f64>,
    pub ratio_start: f64,
    pub ratio_stop: f64,
    pub ratio_count: usize,
    pub separation_nm: f64,
    /// Half-width of the Kronig-Penney box fixing the atomic dipole.
    pub x_nm: f64,
}

impl Default for RatioSweep {
    fn default() -> Self {
        Self {
            base_sizes_nm: vec![4.0, 6.0, 8.0, 10.0],
            ratio_start: 1.0,
            ratio_stop: 2.0,
            ratio_count: 21,
            separation_nm: 5.0,
            x_nm: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FigureSettings {
    pub electron: ParticleConfig,
    pub hole: ParticleConfig,
    pub epsilon_r: Option<f64>,
    pub fig1c: Fig1c,
    pub fig2b: DipoleSweep,
    pub fig2c: DipoleSweep,
    pub fig3a: Fig3a,
    pub fig3b: Fig3b,
    pub fig4a: RatioSweep,
    pub fig4b: RatioSweep,
}

impl Default for FigureSettings {
    fn default() -> Self {
        let mut s = Self {
            electron: ParticleConfig::default(),
            hole: ParticleConfig::default(),
            epsilon_r: None,
            fig1c: Fig1c::default(),
            fig2b: DipoleSweep::default(),
            fig2c: DipoleSweep::default(),
            fig3a: Fig3a::default(),
            fig3b: Fig3b::default(),
            fig4a: RatioSweep::default(),
            fig4b: RatioSweep::default(),
        };
        s.fill();
        s
    }
}

fn check_range(name: &str, start: f64, stop: f64, count: usize, positive: bool) -> Result<(), ScenarioError> {
    let bad = |m: &str| Err(ScenarioError::Validation(format!("figures.{name}: {m}")));
    if count < 2 {
        return bad("count must be at least 2");
    }
    if !(start.is_finite() && stop.is_finite()) || start == stop {
        return bad("start and stop must be finite and differ");
    }
    if positive && !(start > 0.0 && stop > 0.0) {
        return bad("range must be positive");
    }
    Ok(())
}

fn check_positive(name: &str, values: &[f64]) -> Result<(), ScenarioError> {
    if values.is_empty() || values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(ScenarioError::Validation(format!("figures.{name}: values must be positive and non-empty")));
    }
    Ok(())
}

impl FigureSettings {
    pub(crate) fn fill(&mut self) {
        self.electron.fill_electron();
        self.hole.fill_hole();
        self.epsilon_r.get_or_insert(DEFAULT_EPSILON_R);
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let eps = self.epsilon_r.unwrap_or(DEFAULT_EPSILON_R);
        if !(eps >= 1.0 && eps.is_finite()) {
            return Err(ScenarioError::Validation("figures.epsilon_r must be >= 1".into()));
        }
        let probe = DotSpec::cube(1.0).with_particles(self.electron.electron(), self.hole.hole());
        probe.validate().map_err(|e| ScenarioError::Validation(format!("figures: {e}")))?;
        let f = &self.fig1c;
        check_range("fig1c", f.ratio_start, f.ratio_stop, f.count, true)?;
        if !f.omega1_over_delta0.is_finite() {
            return Err(ScenarioError::Validation("figures.fig1c.omega1_over_delta0 must be finite".into()));
        }
        for (name, d) in [("fig2b", &self.fig2b), ("fig2c", &self.fig2c)] {
            check_positive(&format!("{name}.sizes_nm"), &d.sizes_nm)?;
            check_positive(&format!("{name}.aspects"), &d.aspects)?;
            check_range(name, d.field_start_kv_per_cm, d.field_stop_kv_per_cm, d.field_count, false)?;
        }
        let a = &self.fig3a;
        check_range("fig3a", a.separation_start_nm, a.separation_stop_nm, a.count, true)?;
        let b = &self.fig3b;
        check_range("fig3b.size", b.size_start_nm, b.size_stop_nm, b.size_count, true)?;
        check_range("fig3b.depth", b.depth_start_mev, b.depth_stop_mev, b.depth_count, true)?;
        for (name, r) in [("fig4a", &self.fig4a), ("fig4b", &self.fig4b)] {
            check_positive(&format!("{name}.base_sizes_nm"), &r.base_sizes_nm)?;
            check_range(name, r.ratio_start, r.ratio_stop, r.ratio_count, true)?;
            check_positive(&format!("{name}.separation_nm"), &[r.separation_nm])?;
            check_positive(&format!("{name}.x_nm"), &[r.x_nm])?;
        }
        Ok(())
    }

    fn particles_line(&self) -> String {
        let (e, h) = (self.electron.electron(), self.hole.hole());
        format!(
            "particles electron mass_m0={} depth_mev={} hole mass_m0={} depth_mev={} epsilon_r={}",
            e.mass,
            e.depth,
            h.mass,
            h.depth,
            self.epsilon_r.unwrap_or(DEFAULT_EPSILON_R)
        )
    }

    fn dot(&self, size: [f64; 3]) -> DotSpec {
        DotSpec::new(size).with_particles(self.electron.electron(), self.hole.hole())
    }
}

type Row = Result<Vec<Cell>, RowError>;

fn fill_rows(table: &mut ResultTable, points: Vec<Vec<f64>>, f: impl Fn(&[f64]) -> Row + Sync) {
    let rows: Vec<Row> = points.par_iter().map(|p| f(p)).collect();
    for (i, (p, r)) in points.into_iter().zip(rows).enumerate() {
        if let Err(e) = &r {
            table.metadata.push(format!("row {i} {}: {}", e.sentinel, e.message));
        }
        table.rows.push((p, r));
    }
}

fn fig1c(set: &FigureSettings, t: &mut ResultTable) {
    let f = &set.fig1c;
    t.metadata.push(format!(
        "mapping delta0=1 omega0=0 omega1={} omega2=omega1-1 v_f=ratio; energies in units of delta0",
        f.omega1_over_delta0
    ));
    t.log_x = true;
    let k = f.omega1_over_delta0;
    let points = cartesian(&[grid(f.ratio_start, f.ratio_stop, f.count, Spacing::Log)]);
    fill_rows(t, points, |p| {
        let es = eigensystem(&TwoQubitHamiltonian::new(0.0, k, k - 1.0, p[0], 0.0));
        Ok(vec![es.c1.into(), es.c2.into(), es.e01.into(), es.e10.into()])
    });
}

fn dipole_sweep(set: &FigureSettings, d: &DipoleSweep, t: &mut ResultTable, binding: bool, basis: BasisSpec) {
    let fields = grid(d.field_start_kv_per_cm, d.field_stop_kv_per_cm, d.field_count, Spacing::Linear);
    t.metadata.push(format!(
        "mapping dot a x a x a/aspect nm with the field along an a edge; aspects {:?}; sizes_nm {:?}",
        d.aspects, d.sizes_nm
    ));
    if binding {
        t.metadata.push("mapping identical dots stacked along z (dipoles perpendicular to R); value is V_XX*R^3".into());
    }
    let eps = set.epsilon_r.unwrap_or(DEFAULT_EPSILON_R);
    let points = cartesian(&[d.aspects.clone(), d.sizes_nm.clone(), fields]);
    fill_rows(t, points, |p| {
        let (aspect, a, field) = (p[0], p[1], p[2]);
        let ex = solve_exciton(&set.dot([a, a, a / aspect]), field, &basis)?;
        let dip = ex.dipole();
        if binding {
            let unit = PairGeometry::new([0.0, 0.0, 1.0], eps);
            let v = vxx_point_dipole(&dip, &dip, &unit).map_err(RowError::from)?;
            Ok(vec![v.into()])
        } else {
            let mag = (dip[0] * dip[0] + dip[1] * dip[1] + dip[2] * dip[2]).sqrt();
            Ok(vec![mag.into(), dip[0].into(), a.into()])
        }
    });
}

fn fig3a(set: &FigureSettings, t: &mut ResultTable) {
    let f = &set.fig3a;
    let eps = set.epsilon_r.unwrap_or(DEFAULT_EPSILON_R);
    t.metadata.push("mapping O_i=1, atomic dipoles 32x/(9 pi^2) along x evaluated at x=1 nm".into());
    let points = cartesian(&[grid(f.separation_start_nm, f.separation_stop_nm, f.count, Spacing::Linear)]);
    fill_rows(t, points, |p| {
        let r = kp_atomic_dipole(1.0).map_err(RowError::from)?;
        let dip = [r, 0.0, 0.0];
        let coll = vf_dipole(&dip, &dip, 1.0, 1.0, &PairGeometry::new([p[0], 0.0, 0.0], eps)).map_err(RowError::from)?;
        let perp = vf_dipole(&dip, &dip, 1.0, 1.0, &PairGeometry::new([0.0, 0.0, p[0]], eps)).map_err(RowError::from)?;
        Ok(vec![coll.magnitude.into(), perp.magnitude.into()])
    });
}

fn fig3b(set: &FigureSettings, t: &mut ResultTable, basis: BasisSpec) {
    let f = &set.fig3b;
    t.style = PlotStyle::Heatmap;
    t.metadata.push("mapping cube of edge a, zero field, equal electron and hole depths".into());
    let points = cartesian(&[
        grid(f.size_start_nm, f.size_stop_nm, f.size_count, Spacing::Linear),
        grid(f.depth_start_mev, f.depth_stop_mev, f.depth_count, Spacing::Linear),
    ]);
    fill_rows(t, points, |p| {
        let (a, depth) = (p[0], p[1]);
        let dot = set.dot([a; 3]).with_depths(depth);
        let ex = solve_exciton(&dot, 0.0, &basis)?;
        Ok(vec![ex.overlap().into()])
    });
}

fn ratio_sweep(set: &FigureSettings, r: &RatioSweep, t: &mut ResultTable, mixing: bool, basis: BasisSpec) {
    t.metadata.push("mapping dot I is a cube of edge b, dot II a cube of edge a = ratio*b; zero field".into());
    if mixing {
        t.metadata.push(format!(
            "mapping R={} nm along x (collinear), atomic dipoles 32x/(9 pi^2) with x={} nm; scaled value is c_mix*R^3/x^2",
            r.separation_nm, r.x_nm
        ));
    }
    let eps = set.epsilon_r.unwrap_or(DEFAULT_EPSILON_R);
    let points = cartesian(&[
        r.base_sizes_nm.clone(),
        grid(r.ratio_start, r.ratio_stop, r.ratio_count, Spacing::Linear),
    ]);
    fill_rows(t, points, |p| {
        let (b, ratio) = (p[0], p[1]);
        let ex_i = solve_exciton(&set.dot([b; 3]), 0.0, &basis)?;
        let ex_ii = solve_exciton(&set.dot([b * ratio; 3]), 0.0, &basis)?;
        let delta0 = ex_i.energy() - ex_ii.energy();
        if !mixing {
            return Ok(vec![delta0.into(), ex_i.energy().into(), ex_ii.energy().into()]);
        }
        let x = kp_atomic_dipole(r.x_nm).map_err(RowError::from)?;
        let geom = PairGeometry::new([r.separation_nm, 0.0, 0.0], eps);
        let vf = vf_dipole(&[x, 0.0, 0.0], &[x, 0.0, 0.0], ex_i.overlap().min(1.0), ex_ii.overlap().min(1.0), &geom)
            .map_err(RowError::from)?;
        let c = if vf.signed == 0.0 {
            0.0
        } else {
            mixing_coefficient(vf.signed, delta0).map_err(|e| RowError { sentinel: "error", message: e.to_string() })?
        };
        let scaled = c * r.separation_nm.powi(3) / (r.x_nm * r.x_nm);
        Ok(vec![scaled.into(), c.into(), vf.signed.into(), delta0.into()])
    });
}

pub(crate) fn run_figure(s: &Scenario) -> Result<ResultTable, ScenarioError> {
    let name = s.figure.ok_or_else(|| ScenarioError::MissingKey("figure".into()))?;
    let default_settings;
    let set = match &s.figures {
        Some(f) => f,
        None => {
            default_settings = FigureSettings::default();
            &default_settings
        }
    };
    set.validate()?;
    let basis = s.basis.spec();
    let mut t = match name {
        FigureName::Fig1c => ResultTable::new(
            &["v_f_over_delta0_dimless"],
            &["c1_dimless", "c2_dimless", "e01_over_delta0_dimless", "e10_over_delta0_dimless"],
        ),
        FigureName::Fig2b => ResultTable::new(
            &["aspect_dimless", "a_nm", "field_kv_per_cm"],
            &["dipole_e_nm", "dipole_x_e_nm", "dipole_limit_e_nm"],
        ),
        FigureName::Fig2c => {
            ResultTable::new(&["aspect_dimless", "a_nm", "field_kv_per_cm"], &["vxx_r3_mev_nm3"])
        }
        FigureName::Fig3a => ResultTable::new(
            &["separation_nm"],
            &["vf_over_x2_collinear_mev_per_nm2", "vf_over_x2_perpendicular_mev_per_nm2"],
        ),
        FigureName::Fig3b => ResultTable::new(&["a_nm", "depth_mev"], &["overlap_dimless"]),
        FigureName::Fig4a => {
            ResultTable::new(&["b_nm", "a_over_b_dimless"], &["delta0_mev", "omega1_mev", "omega2_mev"])
        }
        FigureName::Fig4b => ResultTable::new(
            &["b_nm", "a_over_b_dimless"],
            &["c_mix_r3_over_x2_nm", "c_mix_dimless", "v_f_mev", "delta0_mev"],
        ),
    };
    t.metadata = standard_metadata(s);
    t.metadata.push(format!("figure {}", name.name()));
    t.metadata.push(set.particles_line());
    match name {
        FigureName::Fig1c => fig1c(set, &mut t),
        FigureName::Fig2b => dipole_sweep(set, &set.fig2b, &mut t, false, basis),
        FigureName::Fig2c => dipole_sweep(set, &set.fig2c, &mut t, true, basis),
        FigureName::Fig3a => fig3a(set, &mut t),
        FigureName::Fig3b => fig3b(set, &mut t, basis),
        FigureName::Fig4a => ratio_sweep(set, &set.fig4a, &mut t, false, basis),
        FigureName::Fig4b => ratio_sweep(set, &set.fig4b, &mut t, true, basis),
    }
    Ok(t)
}
