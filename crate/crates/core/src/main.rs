use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use excitonq::scenario::{
    emit_plot_script, parse_scenario, run_scenario, FigureName, Kind, ResultTable, Scenario, ScenarioError,
};

#[derive(Parser)]
#[command(name = "excitonq", version, about = "Exciton couplings and two-qubit dynamics for quantum-dot pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single-dot envelope solve (energies, dipole, overlap).
    Solve(Common),
    /// Couplings of a dot pair.
    Couplings(Common),
    /// Two-qubit protocols.
    Dynamics(Common),
    /// Canonical sweep behind one of the figures.
    Figure {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(
            FigureName::ALL.map(|f| f.name())
        ))]
        name: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML). Optional for `figure`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long)]
    threads: Option<usize>,
    /// Also write a matplotlib script next to the CSV.
    #[arg(long)]
    emit_plot: bool,
}

enum Failure {
    Config(String),
    Physics(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Physics(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Physics(m) | Failure::Io(m) => m,
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn load(path: &Path) -> Result<Scenario, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn scenario_for(kind: Kind, figure: Option<FigureName>, common: &Common) -> Result<Scenario, Failure> {
    let mut s = match (&common.config, figure) {
        (Some(p), _) => load(p)?,
        (None, Some(f)) => Scenario::figure(f),
        (None, None) => return Err(Failure::Config(format!("`{}` needs --config", kind.name()))),
    };
    if s.kind != kind {
        return Err(Failure::Config(format!(
            "scenario kind is `{}` but the `{}` command was used",
            s.kind.name(),
            kind.name()
        )));
    }
    if let Some(f) = figure {
        s.figure = Some(f);
    }
    s.validate()?;
    Ok(s)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn run(kind: Kind, figure: Option<FigureName>, common: Common) -> Result<(), Failure> {
    let s = scenario_for(kind, figure, &common)?;
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(format!("--threads: {e}")))?;
    }
    let table: ResultTable = run_scenario(&s)?;
    if s.sweep.is_empty() && kind != Kind::Figure {
        if let Some((_, e)) = table.errors().next() {
            return Err(Failure::Physics(e.message.clone()));
        }
    }
    for line in table.metadata.iter().filter(|m| m.starts_with("warning")) {
        eprintln!("excitonq: {line}");
    }
    let csv = table.to_csv();
    let out = common.out.clone().or_else(|| s.output.as_ref().map(PathBuf::from));
    match &out {
        Some(p) => write(p, &csv)?,
        None => print!("{csv}"),
    }
    if common.emit_plot {
        let Some(p) = &out else {
            return Err(Failure::Config("--emit-plot needs an output path".into()));
        };
        let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let script = emit_plot_script(&table, table.style, &name)?;
        write(&p.with_extension("py"), &script)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(c) => run(Kind::Solve, None, c),
        Command::Couplings(c) => run(Kind::Couplings, None, c),
        Command::Dynamics(c) => run(Kind::Dynamics, None, c),
        Command::Figure { name, common } => match name.parse::<FigureName>() {
            Ok(f) => run(Kind::Figure, Some(f), common),
            Err(e) => Err(e.into()),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("excitonq: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
