use serde::{Deserialize, Serialize};

use super::config::{DotConfig, Scenario};
use super::ScenarioError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl SweepAxis {
    pub fn new(name: &str, start: f64, stop: f64, count: usize, spacing: Spacing) -> Self {
        Self { name: name.to_string(), start, stop, count, spacing }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: String| Err(ScenarioError::Validation(format!("sweep `{}`: {m}", self.name)));
        if self.count < 2 {
            return bad(format!("count must be at least 2, got {}", self.count));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return bad("start and stop must be finite".into());
        }
        if self.start == self.stop {
            return bad("start and stop must differ".into());
        }
        if self.spacing == Spacing::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return bad("log spacing needs positive start and stop".into());
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        grid(self.start, self.stop, self.count, self.spacing)
    }
}

/// `count` points from `start` to `stop` inclusive; the end points are exact.
pub fn grid(start: f64, stop: f64, count: usize, spacing: Spacing) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let last = (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i == 0 {
                return start;
            }
            if i + 1 == count {
                return stop;
            }
            let f = i as f64 / last;
            match spacing {
                Spacing::Linear => start + (stop - start) * f,
                Spacing::Log => (start.ln() + (stop.ln() - start.ln()) * f).exp(),
            }
        })
        .collect()
}

/// Cartesian product of the axes, first axis slowest.
pub fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for values in axes {
        let mut next = Vec::with_capacity(out.len() * values.len());
        for prefix in &out {
            for &v in values {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

pub struct SweepParameter {
    pub name: &'static str,
    /// Output column name (always unit-suffixed).
    pub column: &'static str,
    apply: fn(&mut Scenario, f64),
}

fn dot(s: &mut Scenario, second: bool) -> &mut DotConfig {
    let slot = if second { &mut s.dot_ii } else { &mut s.dot_i };
    slot.as_mut().expect("validated scenario has the dot")
}

fn dyn_cfg(s: &mut Scenario) -> &mut super::config::DynamicsConfig {
    s.dynamics.as_mut().expect("validated scenario has dynamics")
}

fn pair(s: &mut Scenario) -> &mut super::config::PairConfig {
    s.pair.as_mut().expect("validated scenario has a pair")
}

macro_rules! dot_params {
    ($second:expr, $p:literal, $c:literal) => {
        [
            SweepParameter { name: concat!($p, ".size_x_nm"), column: concat!($c, "_size_x_nm"), apply: |s, v| dot(s, $second).size_nm[0] = v },
            SweepParameter { name: concat!($p, ".size_y_nm"), column: concat!($c, "_size_y_nm"), apply: |s, v| dot(s, $second).size_nm[1] = v },
            SweepParameter { name: concat!($p, ".size_z_nm"), column: concat!($c, "_size_z_nm"), apply: |s, v| dot(s, $second).size_nm[2] = v },
            SweepParameter { name: concat!($p, ".edge_nm"), column: concat!($c, "_edge_nm"), apply: |s, v| dot(s, $second).size_nm = [v; 3] },
            SweepParameter {
                name: concat!($p, ".depth_mev"),
                column: concat!($c, "_depth_mev"),
                apply: |s, v| {
                    let d = dot(s, $second);
                    d.electron.depth_mev = Some(v);
                    d.hole.depth_mev = Some(v);
                },
            },
            SweepParameter { name: concat!($p, ".gap_mev"), column: concat!($c, "_gap_mev"), apply: |s, v| dot(s, $second).gap_mev = Some(v) },
        ]
    };
}

const DOT_I_PARAMS: [SweepParameter; 6] = dot_params!(false, "dot_i", "dot_i");
const DOT_II_PARAMS: [SweepParameter; 6] = dot_params!(true, "dot_ii", "dot_ii");

const OTHER_PARAMS: [SweepParameter; 10] = [
    SweepParameter { name: "field_kv_per_cm", column: "field_kv_per_cm", apply: |s, v| s.field_kv_per_cm = Some(v) },
    SweepParameter {
        name: "pair.separation_nm",
        column: "separation_nm",
        apply: |s, v| {
            let p = pair(s);
            let r = p.separation_nm;
            let n = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
            p.separation_nm = r.map(|x| x / n * v);
        },
    },
    SweepParameter { name: "pair.epsilon_r", column: "epsilon_r_dimless", apply: |s, v| pair(s).epsilon_r = Some(v) },
    SweepParameter { name: "dynamics.omega1_mev", column: "omega1_mev", apply: |s, v| dyn_cfg(s).omega1_mev = Some(v) },
    SweepParameter { name: "dynamics.omega2_mev", column: "omega2_mev", apply: |s, v| dyn_cfg(s).omega2_mev = Some(v) },
    SweepParameter { name: "dynamics.v_f_mev", column: "v_f_mev", apply: |s, v| dyn_cfg(s).v_f_mev = Some(v) },
    SweepParameter { name: "dynamics.v_xx_mev", column: "v_xx_mev", apply: |s, v| dyn_cfg(s).v_xx_mev = Some(v) },
    SweepParameter { name: "dynamics.rabi_mev", column: "rabi_mev", apply: |s, v| dyn_cfg(s).rabi_mev = Some(v) },
    SweepParameter { name: "dynamics.time_ps", column: "time_ps", apply: |s, v| dyn_cfg(s).time_ps = Some(v) },
    SweepParameter { name: "dynamics.phi_rad", column: "phi_rad", apply: |s, v| dyn_cfg(s).phi_rad = Some(v) },
];

pub static SWEEP_PARAMETERS: [SweepParameter; 22] = {
    let [a0, a1, a2, a3, a4, a5] = DOT_I_PARAMS;
    let [b0, b1, b2, b3, b4, b5] = DOT_II_PARAMS;
    let [c0, c1, c2, c3, c4, c5, c6, c7, c8, c9] = OTHER_PARAMS;
    [a0, a1, a2, a3, a4, a5, b0, b1, b2, b3, b4, b5, c0, c1, c2, c3, c4, c5, c6, c7, c8, c9]
};

pub fn parameter(name: &str) -> Option<&'static SweepParameter> {
    SWEEP_PARAMETERS.iter().find(|p| p.name == name)
}

impl SweepParameter {
    /// Sets this parameter on a copy of `s`. The caller has validated that
    /// the sections the parameter lives in exist.
    pub fn applied(&self, s: &Scenario, value: f64) -> Scenario {
        let mut out = s.clone();
        (self.apply)(&mut out, value);
        out
    }

    /// Section the parameter needs, if any.
    pub fn section(&self) -> Option<&'static str> {
        self.name.split_once('.').map(|(sec, _)| sec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_exact() {
        let g = grid(0.01, 1000.0, 61, Spacing::Log);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[60], 1000.0);
        assert!((g[30] - 3.1622776601683795).abs() < 1e-12);
        let l = grid(1.0, 2.0, 11, Spacing::Linear);
        assert!((l[5] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn cartesian_order_first_axis_slowest() {
        let c = cartesian(&[vec![1.0, 2.0], vec![10.0, 20.0, 30.0]]);
        assert_eq!(c.len(), 6);
        assert_eq!(c[0], vec![1.0, 10.0]);
        assert_eq!(c[1], vec![1.0, 20.0]);
        assert_eq!(c[3], vec![2.0, 10.0]);
    }

    #[test]
    fn parameter_names_are_unique_and_columns_suffixed() {
        for (i, p) in SWEEP_PARAMETERS.iter().enumerate() {
            assert!(SWEEP_PARAMETERS[..i].iter().all(|q| q.name != p.name));
            assert!(["_nm", "_mev", "_kv_per_cm", "_ps", "_rad", "_dimless"].iter().any(|s| p.column.ends_with(s)));
        }
    }
}
