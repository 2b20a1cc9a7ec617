use std::fmt::Write as _;

use super::ScenarioError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    /// Placeholder text such as `unbound` or `undefined`.
    Text(&'static str),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }

    fn render(&self, out: &mut String) {
        match self {
            Cell::Num(x) if x.is_finite() => {
                let _ = write!(out, "{:.8e}", x);
            }
            Cell::Num(x) if x.is_nan() => out.push_str("nan"),
            Cell::Num(x) => out.push_str(if *x > 0.0 { "inf" } else { "-inf" }),
            Cell::Text(t) => out.push_str(t),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Text("undefined"), Cell::Num)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotStyle {
    Line,
    Heatmap,
}

/// Per-row failure: the value columns are filled with `sentinel`.
#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    pub sentinel: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    /// Leading columns holding the grid coordinates.
    pub params: Vec<String>,
    pub values: Vec<String>,
    /// Grid coordinates followed by value cells, one entry per row.
    pub rows: Vec<(Vec<f64>, Result<Vec<Cell>, RowError>)>,
    /// Header lines, written with a `# ` prefix.
    pub metadata: Vec<String>,
    pub style: PlotStyle,
    pub log_x: bool,
}

impl ResultTable {
    pub fn new(params: &[&str], values: &[&str]) -> Self {
        Self {
            params: params.iter().map(|s| s.to_string()).collect(),
            values: values.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            metadata: Vec::new(),
            style: PlotStyle::Line,
            log_x: false,
        }
    }

    pub fn columns(&self) -> impl Iterator<Item = &str> {
        self.params.iter().chain(&self.values).map(String::as_str)
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns().position(|c| c == name)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Numeric value at (row, column); `None` for sentinels.
    pub fn get(&self, row: usize, column: &str) -> Option<f64> {
        let idx = self.column_index(column)?;
        let (params, vals) = self.rows.get(row)?;
        if idx < params.len() {
            return Some(params[idx]);
        }
        vals.as_ref().ok()?.get(idx - params.len())?.as_f64()
    }

    /// Whole column as optional numbers.
    pub fn column(&self, name: &str) -> Vec<Option<f64>> {
        (0..self.rows.len()).map(|r| self.get(r, name)).collect()
    }

    pub fn errors(&self) -> impl Iterator<Item = (usize, &RowError)> {
        self.rows.iter().enumerate().filter_map(|(i, (_, r))| r.as_ref().err().map(|e| (i, e)))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for m in &self.metadata {
            out.push_str("# ");
            out.push_str(m);
            out.push('\n');
        }
        let header: Vec<&str> = self.columns().collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for (params, vals) in &self.rows {
            for (i, p) in params.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                Cell::Num(*p).render(&mut out);
            }
            match vals {
                Ok(cells) => {
                    for c in cells {
                        if !out.ends_with('\n') {
                            out.push(',');
                        }
                        c.render(&mut out);
                    }
                }
                Err(e) => {
                    for _ in &self.values {
                        if !out.ends_with('\n') {
                            out.push(',');
                        }
                        out.push_str(e.sentinel);
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Standalone matplotlib script that plots `csv_name` (a path relative to the
/// script's directory).
pub fn emit_plot_script(table: &ResultTable, style: PlotStyle, csv_name: &str) -> Result<String, ScenarioError> {
    if table.is_empty() || table.values.is_empty() {
        return Err(ScenarioError::NothingToPlot);
    }
    let quoted = |v: &[String]| v.iter().map(|c| format!("{c:?}")).collect::<Vec<_>>().join(", ");
    let mut s = String::new();
    s.push_str("import os\n\nimport matplotlib.pyplot as plt\nimport pandas as pd\n\n");
    s.push_str("here = os.path.dirname(os.path.abspath(__file__))\n");
    let _ = writeln!(
        s,
        "df = pd.read_csv(os.path.join(here, {csv_name:?}), comment=\"#\", na_values=[\"unbound\", \"undefined\", \"error\"])"
    );
    let _ = writeln!(s, "params = [{}]", quoted(&table.params));
    let _ = writeln!(s, "values = [{}]", quoted(&table.values));
    match style {
        PlotStyle::Line => {
            s.push_str(
                "x = params[0] if params else values[0]\n\
                 ys = [c for c in values if c != x]\n\
                 groups = params[1:]\n\
                 fig, axes = plt.subplots(len(ys), 1, figsize=(6, 3 * len(ys)), squeeze=False)\n\
                 for ax, y in zip(axes[:, 0], ys):\n\
                 \x20   if groups:\n\
                 \x20       for key, sub in df.groupby(groups):\n\
                 \x20           ax.plot(sub[x], sub[y], label=str(key))\n\
                 \x20       ax.legend(fontsize=\"x-small\")\n\
                 \x20   else:\n\
                 \x20       ax.plot(df[x], df[y])\n\
                 \x20   ax.set_xlabel(x)\n\
                 \x20   ax.set_ylabel(y)\n",
            );
            if table.log_x {
                s.push_str("    ax.set_xscale(\"log\")\n");
            }
        }
        PlotStyle::Heatmap => {
            if table.params.len() < 2 {
                return Err(ScenarioError::Validation("a heatmap needs two grid columns".into()));
            }
            s.push_str(
                "z = values[0]\n\
                 grid = df.pivot_table(index=params[1], columns=params[0], values=z)\n\
                 fig, ax = plt.subplots(figsize=(6, 5))\n\
                 mesh = ax.pcolormesh(grid.columns, grid.index, grid.values, shading=\"auto\")\n\
                 fig.colorbar(mesh, ax=ax, label=z)\n\
                 ax.set_xlabel(params[0])\n\
                 ax.set_ylabel(params[1])\n",
            );
        }
    }
    s.push_str("fig.tight_layout()\nplt.show()\n");
    Ok(s)
}
