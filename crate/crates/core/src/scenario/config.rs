use serde::{Deserialize, Serialize};

use super::figures::FigureSettings;
use super::sweep::{SweepAxis, SWEEP_PARAMETERS};
use super::ScenarioError;
use crate::coupling::PairGeometry;
use crate::dynamics::BellSign;
use crate::envelope::{BasisSpec, DotSpec, ParticleSpec};
use crate::units::DEFAULT_EPSILON_R;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Solve,
    Couplings,
    Dynamics,
    Figure,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Solve => "solve",
            Kind::Couplings => "couplings",
            Kind::Dynamics => "dynamics",
            Kind::Figure => "figure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureName {
    Fig1c,
    Fig2b,
    Fig2c,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
}

impl FigureName {
    pub const ALL: [FigureName; 7] = [
        FigureName::Fig1c,
        FigureName::Fig2b,
        FigureName::Fig2c,
        FigureName::Fig3a,
        FigureName::Fig3b,
        FigureName::Fig4a,
        FigureName::Fig4b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureName::Fig1c => "fig1c",
            FigureName::Fig2b => "fig2b",
            FigureName::Fig2c => "fig2c",
            FigureName::Fig3a => "fig3a",
            FigureName::Fig3b => "fig3b",
            FigureName::Fig4a => "fig4a",
            FigureName::Fig4b => "fig4b",
        }
    }
}

impl std::str::FromStr for FigureName {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FigureName::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            let names: Vec<_> = FigureName::ALL.iter().map(|f| f.name()).collect();
            ScenarioError::Validation(format!("unknown figure `{s}`; valid names: {}", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleConfig {
    pub mass_m0: Option<f64>,
    pub depth_mev: Option<f64>,
}

impl ParticleConfig {
    fn fill(&mut self, d: ParticleSpec) {
        self.mass_m0.get_or_insert(d.mass);
        self.depth_mev.get_or_insert(d.depth);
    }

    pub fn spec(&self, d: ParticleSpec) -> ParticleSpec {
        ParticleSpec::new(self.mass_m0.unwrap_or(d.mass), self.depth_mev.unwrap_or(d.depth))
    }

    pub fn electron(&self) -> ParticleSpec {
        self.spec(ParticleSpec::default_electron())
    }

    pub fn hole(&self) -> ParticleSpec {
        self.spec(ParticleSpec::default_hole())
    }

    pub(crate) fn fill_electron(&mut self) {
        self.fill(ParticleSpec::default_electron());
    }

    pub(crate) fn fill_hole(&mut self) {
        self.fill(ParticleSpec::default_hole());
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DotConfig {
    pub size_nm: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_mev: Option<f64>,
    #[serde(default)]
    pub electron: ParticleConfig,
    #[serde(default)]
    pub hole: ParticleConfig,
}

impl DotConfig {
    pub fn spec(&self) -> DotSpec {
        DotSpec::new(self.size_nm)
            .with_particles(self.electron.electron(), self.hole.hole())
            .with_gap(self.gap_mev.unwrap_or(0.0))
    }

    fn fill(&mut self) {
        self.gap_mev.get_or_insert(0.0);
        self.electron.fill_electron();
        self.hole.fill_hole();
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    pub separation_nm: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atomic_dipole_i_e_nm: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atomic_dipole_ii_e_nm: Option<[f64; 3]>,
}

impl PairConfig {
    pub fn geometry(&self) -> PairGeometry {
        PairGeometry::new(self.separation_nm, self.epsilon_r.unwrap_or(DEFAULT_EPSILON_R))
    }

    fn fill(&mut self) {
        self.epsilon_r.get_or_insert(DEFAULT_EPSILON_R);
        self.atomic_dipole_i_e_nm.get_or_insert([0.0; 3]);
        self.atomic_dipole_ii_e_nm.get_or_insert([0.0; 3]);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    pub n_basis: Option<usize>,
    pub box_factor: Option<f64>,
}

impl BasisConfig {
    pub fn spec(&self) -> BasisSpec {
        let d = BasisSpec::default();
        BasisSpec {
            n_basis: self.n_basis.unwrap_or(d.n_basis),
            box_factor: self.box_factor.unwrap_or(d.box_factor),
        }
    }

    fn fill(&mut self) {
        let d = BasisSpec::default();
        self.n_basis.get_or_insert(d.n_basis);
        self.box_factor.get_or_insert(d.box_factor);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    Eigensystem,
    Free,
    Cnot12,
    BellForster,
    BellBiexciton,
    SchemeFidelity,
    DfsCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignConfig {
    Plus,
    Minus,
}

impl From<SignConfig> for BellSign {
    fn from(s: SignConfig) -> Self {
        match s {
            SignConfig::Plus => BellSign::Plus,
            SignConfig::Minus => BellSign::Minus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsConfig {
    pub protocol: Protocol,
    /// Take ω₁, ω₂, V_F and V_XX from the dot pair instead of the keys below.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from_dots: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0_mev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega1_mev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega2_mev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_f_mev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_xx_mev: Option<f64>,
    /// Defaults to |V_XX|/20.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rabi_mev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<SignConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_ps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_rad: Option<f64>,
    /// Real amplitudes over |00⟩, |01⟩, |10⟩, |11⟩; normalized on use.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<[f64; 4]>,
}

impl DynamicsConfig {
    fn fill(&mut self) {
        self.from_dots.get_or_insert(false);
        self.omega0_mev.get_or_insert(0.0);
        if !self.from_dots.unwrap_or(false) {
            self.omega1_mev.get_or_insert(0.0);
            self.omega2_mev.get_or_insert(0.0);
            self.v_f_mev.get_or_insert(0.0);
            self.v_xx_mev.get_or_insert(0.0);
        }
        if self.protocol == Protocol::BellBiexciton {
            self.sign.get_or_insert(SignConfig::Plus);
        }
        match self.protocol {
            Protocol::Free => {
                self.initial.get_or_insert([0.0, 0.0, 1.0, 0.0]);
            }
            Protocol::DfsCheck => {
                self.initial.get_or_insert([0.0, 1.0, 1.0, 0.0]);
            }
            _ => {}
        }
    }
}

/// A validated scenario with all defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figure: Option<FigureName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_kv_per_cm: Option<f64>,
    #[serde(default)]
    pub basis: BasisConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dot_i: Option<DotConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dot_ii: Option<DotConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figures: Option<FigureSettings>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepAxis>,
}

impl Scenario {
    /// Scenario for `figure <name>` with every figure default.
    pub fn figure(name: FigureName) -> Self {
        let mut s = Scenario {
            kind: Kind::Figure,
            figure: Some(name),
            output: None,
            field_kv_per_cm: None,
            basis: BasisConfig::default(),
            dot_i: None,
            dot_ii: None,
            pair: None,
            dynamics: None,
            figures: None,
            sweep: Vec::new(),
        };
        s.fill_defaults();
        s
    }

    pub fn field(&self) -> f64 {
        self.field_kv_per_cm.unwrap_or(0.0)
    }

    pub fn epsilon_r(&self) -> f64 {
        self.pair.as_ref().and_then(|p| p.epsilon_r).unwrap_or(DEFAULT_EPSILON_R)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    fn fill_defaults(&mut self) {
        self.field_kv_per_cm.get_or_insert(0.0);
        self.basis.fill();
        if let Some(d) = self.dot_i.as_mut() {
            d.fill();
        }
        if self.dot_ii.is_none() && matches!(self.kind, Kind::Couplings) {
            self.dot_ii = self.dot_i.clone();
        }
        if self.dot_ii.is_none() && self.dynamics.as_ref().is_some_and(|d| d.from_dots == Some(true)) {
            self.dot_ii = self.dot_i.clone();
        }
        if let Some(d) = self.dot_ii.as_mut() {
            d.fill();
        }
        if let Some(p) = self.pair.as_mut() {
            p.fill();
        }
        if let Some(d) = self.dynamics.as_mut() {
            d.fill();
        }
        if self.kind == Kind::Figure {
            self.figures.get_or_insert_with(FigureSettings::default).fill();
        } else if let Some(f) = self.figures.as_mut() {
            f.fill();
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: String| Err(ScenarioError::Validation(m));
        let missing = |k: &str| Err(ScenarioError::MissingKey(k.to_string()));
        let finite = |name: &str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(ScenarioError::Validation(format!("`{name}` must be finite")))
            }
        };
        finite("field_kv_per_cm", self.field())?;
        self.basis.spec().validate().map_err(|e| ScenarioError::Validation(e.to_string()))?;
        for (name, dot) in [("dot_i", &self.dot_i), ("dot_ii", &self.dot_ii)] {
            if let Some(d) = dot {
                d.spec().validate().map_err(|e| ScenarioError::Validation(format!("{name}: {e}")))?;
                finite(&format!("{name}.gap_mev"), d.gap_mev.unwrap_or(0.0))?;
            }
        }
        if let Some(p) = &self.pair {
            p.geometry().validate().map_err(|e| ScenarioError::Validation(format!("pair: {e}")))?;
            for v in [p.atomic_dipole_i_e_nm, p.atomic_dipole_ii_e_nm].into_iter().flatten() {
                if v.iter().any(|x| !x.is_finite()) {
                    return bad("pair: atomic dipoles must be finite".into());
                }
            }
        }
        let needs_pair = |s: &Self| -> Result<(), ScenarioError> {
            if s.dot_i.is_none() {
                return missing("dot_i");
            }
            if s.pair.is_none() {
                return missing("pair");
            }
            Ok(())
        };
        match self.kind {
            Kind::Solve => {
                if self.dot_i.is_none() {
                    return missing("dot_i");
                }
            }
            Kind::Couplings => needs_pair(self)?,
            Kind::Dynamics => {
                let Some(d) = &self.dynamics else {
                    return missing("dynamics");
                };
                if d.from_dots == Some(true) {
                    needs_pair(self)?;
                }
                for (k, v) in [
                    ("omega0_mev", d.omega0_mev),
                    ("omega1_mev", d.omega1_mev),
                    ("omega2_mev", d.omega2_mev),
                    ("v_f_mev", d.v_f_mev),
                    ("v_xx_mev", d.v_xx_mev),
                    ("time_ps", d.time_ps),
                    ("phi_rad", d.phi_rad),
                ] {
                    if let Some(x) = v {
                        finite(&format!("dynamics.{k}"), x)?;
                    }
                }
                if let Some(r) = d.rabi_mev {
                    if !(r > 0.0 && r.is_finite()) {
                        return bad("dynamics.rabi_mev must be positive".into());
                    }
                }
                if let Some(a) = d.initial {
                    if a.iter().any(|x| !x.is_finite()) || a.iter().all(|&x| x == 0.0) {
                        return bad("dynamics.initial must be finite and nonzero".into());
                    }
                }
                match d.protocol {
                    Protocol::Free if d.time_ps.is_none() => return missing("dynamics.time_ps"),
                    Protocol::DfsCheck if d.phi_rad.is_none() => return missing("dynamics.phi_rad"),
                    _ => {}
                }
            }
            Kind::Figure => {
                if self.figure.is_none() {
                    return missing("figure");
                }
            }
        }
        if let Some(f) = &self.figures {
            f.validate()?;
        }
        for axis in &self.sweep {
            axis.validate()?;
            let present = match super::sweep::parameter(&axis.name).and_then(|p| p.section()) {
                Some("dot_i") => self.dot_i.is_some(),
                Some("dot_ii") => self.dot_ii.is_some(),
                Some("pair") => self.pair.is_some(),
                Some("dynamics") => self.dynamics.is_some(),
                _ => true,
            };
            if !present {
                return bad(format!("sweep `{}` refers to a section the scenario does not define", axis.name));
            }
            if self.kind == Kind::Figure {
                return bad("figure scenarios take their grid from [figures], not [[sweep]]".into());
            }
        }
        for (i, a) in self.sweep.iter().enumerate() {
            if self.sweep[..i].iter().any(|b| b.name == a.name) {
                return bad(format!("sweep axis `{}` appears twice", a.name));
            }
        }
        let rows: f64 = self.sweep.iter().map(|a| a.count as f64).product();
        if rows > 1e7 {
            return bad(format!("sweep grid has {rows} points; the limit is 10^7"));
        }
        Ok(())
    }
}

fn line_of(text: &str, span: Option<std::ops::Range<usize>>) -> Option<usize> {
    span.map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
}

/// If `key` differs from an accepted key only in its unit suffix, returns that key.
fn unit_sibling<'a>(key: &str, accepted: impl IntoIterator<Item = &'a str>) -> Option<String> {
    const SUFFIXES: [&str; 7] = ["_kv_per_cm", "_e_nm", "_mev", "_nm", "_ps", "_rad", "_m0"];
    for cand in accepted {
        let Some(suffix) = SUFFIXES.iter().find(|s| cand.ends_with(*s)) else {
            continue;
        };
        let stem = &cand[..cand.len() - suffix.len()];
        if key != cand && (key == stem || key.strip_prefix(stem).is_some_and(|r| r.starts_with('_'))) {
            return Some(cand.to_string());
        }
    }
    None
}

fn backticked(s: &str) -> Vec<&str> {
    s.split('`').skip(1).step_by(2).collect()
}

fn classify(message: &str, line: Option<usize>) -> ScenarioError {
    let msg = message.trim();
    if let Some(rest) = msg.strip_prefix("unknown field ") {
        let names = backticked(rest);
        if let Some((key, expected)) = names.split_first() {
            if let Some(sib) = unit_sibling(key, expected.iter().copied()) {
                return ScenarioError::UnitMismatch { key: key.to_string(), expected: sib, line };
            }
            return ScenarioError::UnknownKey { key: key.to_string(), line };
        }
    }
    if let Some(rest) = msg.strip_prefix("missing field ") {
        if let Some(key) = backticked(rest).first() {
            return ScenarioError::MissingKey(key.to_string());
        }
    }
    ScenarioError::Validation(match line {
        Some(l) => format!("line {l}: {msg}"),
        None => msg.to_string(),
    })
}

/// Parses and validates a TOML scenario, filling defaults.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    if let Err(e) = text.parse::<toml::Table>() {
        return Err(ScenarioError::Parse {
            line: line_of(text, e.span()).unwrap_or(1),
            message: e.message().to_string(),
        });
    }
    let mut s: Scenario = toml::from_str(text).map_err(|e| classify(e.message(), line_of(text, e.span())))?;
    for axis in &s.sweep {
        if !SWEEP_PARAMETERS.iter().any(|p| p.name == axis.name) {
            if let Some(sib) = unit_sibling(&axis.name, SWEEP_PARAMETERS.iter().map(|p| p.name)) {
                return Err(ScenarioError::UnitMismatch { key: axis.name.clone(), expected: sib, line: None });
            }
            let names: Vec<_> = SWEEP_PARAMETERS.iter().map(|p| p.name).collect();
            return Err(ScenarioError::Validation(format!(
                "unknown sweep parameter `{}`; valid names: {}",
                axis.name,
                names.join(", ")
            )));
        }
    }
    s.fill_defaults();
    s.validate()?;
    Ok(s)
}
