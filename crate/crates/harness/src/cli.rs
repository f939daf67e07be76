//! Command-line front end: `theory`, `run`, `selfavg`, `collapse`, `noisy`.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use encdec_core::noise::ErrorKind;
use encdec_core::observables::ValueKind;

use crate::collapse::{curves_from_rows, fidelity_curves, run_data_collapse, CollapseOptions};
use crate::config::{
    parse_grid, Backend, ExperimentConfig, ExperimentKind, InitialState, OutputFormat, TheoryQuantity,
};
use crate::error::{HarnessError, Result};
use crate::selfavg::run_selfaveraging_study;
use crate::sweep::{run_noisy_device, run_quenched_sweep};
use crate::table::{parse_model, read_csv, write_json, AggregatedRow, ResultTable};
use crate::theory_export::{theory_rows, write_theory};

#[derive(Debug, Parser)]
#[command(name = "encdec", version, about = "Noisy encoding-decoding random circuits: theory curves and Monte Carlo")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Export closed-form curves.
    Theory {
        #[command(flatten)]
        shared: SharedArgs,
        /// Quantities to export (comma separated).
        #[arg(long, value_delimiter = ',', value_enum)]
        quantity: Vec<TheoryQuantity>,
    },
    /// Quenched Monte Carlo sweep.
    Run {
        #[command(flatten)]
        shared: SharedArgs,
    },
    /// Quenched versus annealed averages and fluctuation decay fits.
    Selfavg {
        #[command(flatten)]
        shared: SharedArgs,
    },
    /// Finite-size data collapse of a sweep or of an aggregated CSV.
    Collapse {
        #[command(flatten)]
        shared: SharedArgs,
        /// Aggregated CSV to collapse instead of running a sweep.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        value_kind: Option<String>,
        /// Exponent search range `lo:hi`.
        #[arg(long)]
        nu_range: Option<String>,
        /// Critical strength search range `lo:hi`.
        #[arg(long)]
        critical_range: Option<String>,
        #[arg(long)]
        bootstrap: Option<usize>,
    },
    /// Layered device noise with a coherent mid-circuit layer.
    Noisy {
        #[command(flatten)]
        shared: SharedArgs,
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

#[derive(Debug, Args, Default)]
pub struct SharedArgs {
    /// Configuration file (TOML or JSON).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// System sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long)]
    pub rate: Option<f64>,
    /// Explicit logical register size.
    #[arg(long)]
    pub logical: Option<usize>,
    /// Strength grid `lo:hi:steps`.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub realizations: Option<usize>,
    #[arg(long)]
    pub trajectories: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub backend: Option<Backend>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Error model name (coherent, depolarizing, coherent_disordered, ...).
    #[arg(long)]
    pub model: Option<String>,
    /// Renyi indices, comma separated; `inf` is accepted.
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<f64>,
    /// Entropies to record, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub observables: Vec<String>,
    #[arg(long, value_enum)]
    pub initial: Option<InitialState>,
    #[arg(long)]
    pub id: Option<String>,
}

fn config_error(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s.split_once(':').ok_or_else(|| config_error(format!("range must be lo:hi, got {s:?}")))?;
    let lo = a.trim().parse().map_err(|_| config_error(format!("bad range start {a:?}")))?;
    let hi = b.trim().parse().map_err(|_| config_error(format!("bad range end {b:?}")))?;
    Ok((lo, hi))
}

/// Configuration from `--config` (or defaults) with command-line overrides applied.
pub fn build_config(kind: ExperimentKind, args: &SharedArgs) -> Result<ExperimentConfig> {
    let mut c = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    c.kind = kind;
    if !args.n.is_empty() {
        c.sizes = args.n.clone();
    }
    if let Some(r) = args.rate {
        c.rate = Some(r);
        c.logical = None;
    }
    if let Some(k) = args.logical {
        c.logical = Some(k);
    }
    if let Some(g) = &args.grid {
        c.grid = parse_grid(g)?;
    }
    if let Some(r) = args.realizations {
        c.realizations = r;
    }
    if let Some(t) = args.trajectories {
        c.trajectories = t;
    }
    if let Some(s) = args.seed {
        c.seed = s;
    }
    if let Some(b) = args.backend {
        c.backend = b;
    }
    if let Some(o) = &args.out {
        c.output = Some(o.clone());
    }
    if let Some(f) = args.format {
        c.format = f;
    }
    if let Some(m) = &args.model {
        c.model = parse_model(m).map_err(|e| config_error(e.to_string()))?;
    }
    if !args.q.is_empty() {
        c.q = args.q.clone();
    }
    if !args.observables.is_empty() {
        c.observables = args
            .observables
            .iter()
            .map(|s| ValueKind::parse(s).ok_or_else(|| config_error(format!("unknown observable {s:?}"))))
            .collect::<Result<_>>()?;
    }
    if let Some(i) = args.initial {
        c.initial_state = i;
    }
    if let Some(id) = &args.id {
        c.experiment_id = id.clone();
    }
    Ok(c)
}

fn output_dir(c: &ExperimentConfig) -> PathBuf {
    c.output.clone().unwrap_or_else(|| PathBuf::from("results"))
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Theory { shared, quantity } => {
            let mut c = build_config(ExperimentKind::TheoryExport, &shared)?;
            if !quantity.is_empty() {
                c.theory = quantity;
            }
            if c.theory.is_empty() {
                c.theory = vec![TheoryQuantity::Fidelity];
            }
            let rows = theory_rows(&c)?;
            let dir = output_dir(&c);
            std::fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;
            let path = dir.join(format!("{}_theory.{}", c.experiment_id, c.format.extension()));
            write_theory(&rows, &path, c.format)?;
            report(&[path]);
        }
        Command::Run { shared } => {
            let c = build_config(ExperimentKind::Sweep, &shared)?;
            let sweep = run_quenched_sweep(&c)?;
            report(&ResultTable::from_sweep(&sweep)?.emit(&output_dir(&c), c.format)?);
        }
        Command::Selfavg { shared } => {
            let c = build_config(ExperimentKind::Selfavg, &shared)?;
            let (sweep, rep) = run_selfaveraging_study(&c)?;
            let dir = output_dir(&c);
            let mut paths = ResultTable::from_sweep(&sweep)?.emit(&dir, c.format)?;
            let path = dir.join(format!("{}_selfavg.json", c.experiment_id));
            write_json(&path, &rep)?;
            paths.push(path);
            report(&paths);
        }
        Command::Collapse { shared, input, value_kind, nu_range, critical_range, bootstrap } => {
            let mut c = build_config(ExperimentKind::Collapse, &shared)?;
            if let Some(v) = value_kind {
                c.collapse.value_kind = ValueKind::parse(&v).ok_or_else(|| config_error(format!("unknown kind {v:?}")))?;
            }
            if let Some(r) = nu_range {
                c.collapse.nu_range = parse_range(&r)?;
            }
            if let Some(r) = critical_range {
                c.collapse.critical_range = Some(parse_range(&r)?);
            }
            if let Some(b) = bootstrap {
                c.collapse.bootstrap = b;
            }
            let dir = output_dir(&c);
            let mut paths = Vec::new();
            let curves = match input {
                Some(path) => {
                    let rows: Vec<AggregatedRow> = read_csv(&path)?;
                    let q = (c.collapse.value_kind != ValueKind::Fidelity).then(|| c.q.first().copied()).flatten();
                    curves_from_rows(&rows, c.collapse.value_kind, q)
                }
                None => {
                    let sweep = run_quenched_sweep(&c)?;
                    paths.extend(ResultTable::from_sweep(&sweep)?.emit(&dir, c.format)?);
                    fidelity_curves(&sweep)
                }
            };
            let critical_range = match c.collapse.critical_range {
                Some(r) => r,
                None => strength_window(&curves.iter().flat_map(|c| c.strengths.clone()).collect::<Vec<_>>())?,
            };
            let options =
                CollapseOptions { nu_range: c.collapse.nu_range, critical_range, bootstrap: c.collapse.bootstrap, seed: c.seed };
            let fit = run_data_collapse(&curves, &options)?;
            std::fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;
            let path = dir.join(format!("{}_collapse.json", c.experiment_id));
            write_json(&path, &fit)?;
            paths.push(path);
            report(&paths);
            println!("critical = {:.6} {:?}, nu = {:.4} {:?}", fit.critical, fit.critical_ci, fit.nu, fit.nu_ci);
        }
        Command::Noisy { shared, epsilon } => {
            let mut c = build_config(ExperimentKind::NoisyDevice, &shared)?;
            c.model = ErrorKind::DeviceNoise;
            if shared.backend.is_none() && c.backend == Backend::Pure {
                c.backend = Backend::Trajectory;
            }
            if let Some(e) = epsilon {
                c.epsilon = Some(e);
            }
            let sweep = run_noisy_device(&c)?;
            report(&ResultTable::from_sweep(&sweep)?.emit(&output_dir(&c), c.format)?);
        }
    }
    Ok(())
}

fn strength_window(strengths: &[f64]) -> Result<(f64, f64)> {
    let lo = strengths.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = strengths.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Err(HarnessError::Analysis("empty selection".into()));
    }
    Ok((lo, hi))
}

/// Parse arguments, run, and map the outcome to a process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
