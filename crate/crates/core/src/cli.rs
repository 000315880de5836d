//! Command-line front end: `riccati-fem <study> [flags]`.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 solver failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::study::{run_study, rate_table, write_csv, write_svg, Case, StudyConfig, StudyError, StudyResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "riccati-fem", version, about = "Finite-element LQR gain convergence studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scalar perturbation study over an ε grid.
    Scalar(Flags),
    /// 1D heat equation, finite horizon.
    Thermal1d(Flags),
    /// 2D heat equation on the unit square, infinite horizon.
    Thermal2d(Flags),
    /// 1D weakly damped wave equation, infinite horizon.
    Wave(Flags),
    /// Experiments outside the smoothness assumptions.
    Violation(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationCase {
    Gaussian2d,
    Delta1d,
}

#[derive(Debug, Clone, Default, Args)]
struct Flags {
    /// Polynomial orders, comma separated.
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<usize>>,
    /// Elements per direction, comma separated.
    #[arg(long, value_delimiter = ',')]
    elements: Option<Vec<usize>>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "eps-grid", value_delimiter = ',')]
    eps_grid: Option<Vec<f64>>,
    /// Violation experiment (violation subcommand only).
    #[arg(long, value_enum)]
    case: Option<ViolationCase>,
    /// CSV output path [default: <case>.csv].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional SVG plot path.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Use the published parameter set.
    #[arg(long)]
    paper: bool,
    /// JSON file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub orders: Option<Vec<usize>>,
    pub elements: Option<Vec<usize>>,
    pub tau: Option<f64>,
    pub dt: Option<f64>,
    pub eps_grid: Option<Vec<f64>>,
    pub case: Option<ViolationCase>,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub paper: Option<bool>,
}

impl FileConfig {
    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// Values in `other` take precedence.
    pub fn merged(self, other: FileConfig) -> FileConfig {
        FileConfig {
            orders: other.orders.or(self.orders),
            elements: other.elements.or(self.elements),
            tau: other.tau.or(self.tau),
            dt: other.dt.or(self.dt),
            eps_grid: other.eps_grid.or(self.eps_grid),
            case: other.case.or(self.case),
            out: other.out.or(self.out),
            plot: other.plot.or(self.plot),
            paper: other.paper.or(self.paper),
        }
    }

    /// Resolves the study configuration for `subcommand`.
    pub fn to_study(&self, subcommand: &str) -> Result<StudyConfig, String> {
        let case = match (subcommand, self.case) {
            ("violation", Some(ViolationCase::Gaussian2d)) => Case::ViolationGaussian2d,
            ("violation", Some(ViolationCase::Delta1d)) => Case::ViolationDelta1d,
            ("violation", None) => return Err("violation needs --case gaussian2d|delta1d".into()),
            (_, Some(_)) => return Err("--case only applies to the violation subcommand".into()),
            (name, None) => Case::from_name(name).ok_or_else(|| format!("unknown study {name}"))?,
        };
        let mut cfg = if self.paper.unwrap_or(false) {
            StudyConfig::paper(case)
        } else {
            StudyConfig::for_case(case)
        };
        if let Some(v) = &self.orders {
            cfg.orders = v.clone();
        }
        if let Some(v) = &self.elements {
            cfg.mesh_sizes = v.clone();
        }
        if let Some(v) = self.tau {
            cfg.tau = v;
        }
        if let Some(v) = self.dt {
            cfg.dt = v;
        }
        if let Some(v) = &self.eps_grid {
            cfg.eps_grid = v.clone();
        }
        cfg.out = Some(self.out.clone().unwrap_or_else(|| PathBuf::from(format!("{}.csv", case.name()))));
        cfg.plot = self.plot.clone();
        Ok(cfg)
    }
}

impl From<&Flags> for FileConfig {
    fn from(f: &Flags) -> Self {
        FileConfig {
            orders: f.orders.clone(),
            elements: f.elements.clone(),
            tau: f.tau,
            dt: f.dt,
            eps_grid: f.eps_grid.clone(),
            case: f.case,
            out: f.out.clone(),
            plot: f.plot.clone(),
            paper: f.paper.then_some(true),
        }
    }
}

/// Parses `argv` (program name first), runs the study and returns the exit
/// code. Messages go to `stdout`/`stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let (name, flags) = match &cli.command {
        Command::Scalar(f) => ("scalar", f),
        Command::Thermal1d(f) => ("thermal1d", f),
        Command::Thermal2d(f) => ("thermal2d", f),
        Command::Wave(f) => ("wave", f),
        Command::Violation(f) => ("violation", f),
    };
    let cfg = match resolve(name, flags) {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_INVALID;
        }
    };
    execute(&cfg, stdout, stderr)
}

fn resolve(name: &str, flags: &Flags) -> Result<StudyConfig, String> {
    let file = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            FileConfig::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => FileConfig::default(),
    };
    file.merged(FileConfig::from(flags)).to_study(name)
}

fn execute(cfg: &StudyConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match run_study(cfg) {
        Ok(r) => r,
        Err(e @ StudyError::InvalidConfig(_)) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INVALID;
        }
        Err(e) => {
            let _ = writeln!(stderr, "solver failure: {e}");
            return EXIT_SOLVER;
        }
    };
    let _ = write!(stdout, "{}", rate_table(&result));
    if !result.failures.is_empty() {
        for f in &result.failures {
            let _ = writeln!(stderr, "solver failure at k={} n={}: {}", f.k, f.n, f.message);
        }
        return EXIT_SOLVER;
    }
    match write_outputs(&result, cfg.out.as_deref(), cfg.plot.as_deref()) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn write_outputs(result: &StudyResult, out: Option<&Path>, plot: Option<&Path>) -> Result<(), StudyError> {
    if let Some(p) = out {
        write_csv(result, p)?;
    }
    if let Some(p) = plot {
        write_svg(result, p)?;
    }
    Ok(())
}
