//! Scenario files, parameter sweeps, figure tables and CSV output.
//!
//! A scenario is a TOML document. Physical keys carry their unit in the name
//! (`size_nm`, `field_kv_per_cm`, `v_f_mev`, ...); unknown keys are rejected.

use thiserror::Error;

mod config;
mod figures;
mod run;
mod sweep;
mod table;

pub use config::{
    parse_scenario, BasisConfig, DotConfig, DynamicsConfig, FigureName, Kind, PairConfig,
    ParticleConfig, Protocol, Scenario, SignConfig,
};
pub use figures::{DipoleSweep, Fig1c, Fig3a, Fig3b, FigureSettings, RatioSweep};
pub use run::{run_scenario, standard_metadata};
pub use sweep::{cartesian, grid, parameter, Spacing, SweepAxis, SweepParameter, SWEEP_PARAMETERS};
pub use table::{emit_plot_script, Cell, PlotStyle, ResultTable, RowError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown key `{key}`{}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    UnknownKey { key: String, line: Option<usize> },
    #[error("key `{key}` has the wrong unit suffix; expected `{expected}`")]
    UnitMismatch { key: String, expected: String, line: Option<usize> },
    #[error("missing required key `{0}`")]
    MissingKey(String),
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("nothing to plot: the table is empty")]
    NothingToPlot,
}
