//! Command-line front end: reads an experiment config, runs one of the
//! propagation, optimization or analysis commands and writes plot-ready
//! CSV and JSON files into an output directory.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hyqoc::encoding::CircuitVariant;
use serde::Serialize;

pub mod commands;
pub mod config;
mod error;
pub mod output;

pub use config::{BackendSpec, ExperimentConfig, Method, ReadoutKind};
pub use error::CliError;
use output::Output;

#[derive(Debug, Parser)]
#[command(name = "hyqoc", version, about = "Laser-pulse optimal control on classical and circuit propagators")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Default)]
pub struct GlobalArgs {
    /// Experiment config (JSON). Flags below override its fields.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Backend spec(s), comma separated: euler:DT_FINE, exact[:DT], circuit[:DT].
    #[arg(long, global = true, value_name = "SPEC")]
    pub backend: Option<String>,
    #[arg(long, global = true, value_parser = parse_variant)]
    pub variant: Option<CircuitVariant>,
    /// none, bf, sq-depol-1, sq-depol-2, mixed or custom:FILE.
    #[arg(long, global = true)]
    pub noise: Option<String>,
    /// Shots per circuit for sampled readout.
    #[arg(long, global = true)]
    pub shots: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub readout: Option<ReadoutKind>,
}

fn parse_variant(s: &str) -> Result<CircuitVariant, String> {
    s.parse().map_err(|e: hyqoc::Error| e.to_string())
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Propagate one pulse with one or more backends and compare populations.
    Propagate,
    /// Optimize the pulse.
    Optimize(OptimizeArgs),
    /// Fidelity, populations and gate counts of noisy circuits versus steps.
    NoiseStudy,
    /// Exact line spectrum of a pulse, and a spectrogram over an optimization.
    Spectrum(SpectrumArgs),
    /// Trotter error versus step size and two-qubit gate scaling.
    Bench,
    /// Gate counts of the evolution circuit for every variant, plus a dump.
    GateCount,
}

#[derive(Debug, Clone, Args, Default)]
pub struct OptimizeArgs {
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// GA schedule preset: three-states, eleven-states or alternating.
    #[arg(long)]
    pub preset: Option<String>,
    /// Iteration budget for nelder-mead and quasi-newton.
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Backend spec for a noise-free re-evaluation of the best pulse.
    #[arg(long, value_name = "SPEC")]
    pub reevaluate: Option<String>,
}

#[derive(Debug, Clone, Args, Default)]
pub struct SpectrumArgs {
    /// Pulse JSON file (defaults to the config pulse).
    #[arg(long, value_name = "FILE")]
    pub pulse: Option<PathBuf>,
    /// run.json of an optimization; adds a per-iteration spectrogram.
    #[arg(long, value_name = "FILE")]
    pub run: Option<PathBuf>,
}

/// Command name plus the fully resolved configuration; its hash identifies a run.
#[derive(Serialize)]
struct RunIdentity<'a> {
    command: &'a str,
    config: &'a ExperimentConfig,
    spectrum_pulse: Option<String>,
    spectrum_run: Option<String>,
}

/// Config after applying the command-line overrides.
pub fn resolve_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let g = &cli.global;
    let mut cfg = match &g.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(b) = &g.backend {
        cfg.backend = Some(b.clone());
    }
    if let Some(v) = g.variant {
        cfg.variant = v;
    }
    if let Some(n) = &g.noise {
        cfg.noise = n.clone();
    }
    if let Some(s) = g.shots {
        cfg.shots = s;
    }
    if let Some(r) = g.readout {
        cfg.readout = r;
    }
    if let Command::Optimize(a) = &cli.command {
        if let Some(m) = a.method {
            cfg.optimize.method = m;
        }
        if let Some(p) = &a.preset {
            cfg.optimize.ga_preset = p.clone();
            cfg.optimize.ga = None;
        }
        if let Some(n) = a.max_iter {
            cfg.optimize.max_iter = n;
        }
        if let Some(r) = &a.reevaluate {
            cfg.optimize.reevaluate = Some(r.clone());
        }
    }
    Ok(cfg)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Propagate => "propagate",
        Command::Optimize(_) => "optimize",
        Command::NoiseStudy => "noise-study",
        Command::Spectrum(_) => "spectrum",
        Command::Bench => "bench",
        Command::GateCount => "gate-count",
    }
}

/// Runs a parsed command. Returns the human-readable summary that `main` prints.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let cfg = resolve_config(cli)?;
    let (sp, sr) = match &cli.command {
        Command::Spectrum(a) => (
            a.pulse.as_ref().map(|p| p.display().to_string()),
            a.run.as_ref().map(|p| p.display().to_string()),
        ),
        _ => (None, None),
    };
    let identity = RunIdentity {
        command: command_name(&cli.command),
        config: &cfg,
        spectrum_pulse: sp,
        spectrum_run: sr,
    };
    let identity = serde_json::to_string(&identity).expect("config serializes");
    let mut out = Output::create(&cli.global.out, &identity, cfg.seed)?;
    let summary = match &cli.command {
        Command::Propagate => commands::propagate::run(&cfg, &mut out)?,
        Command::Optimize(_) => commands::optimize::run(&cfg, &mut out)?,
        Command::NoiseStudy => commands::noise_study::run(&cfg, &mut out)?,
        Command::Spectrum(a) => commands::spectrum::run(&cfg, a, &mut out)?,
        Command::Bench => commands::bench::run(&cfg, &mut out)?,
        Command::GateCount => commands::gate_count::run(&cfg, &mut out)?,
    };
    let files: Vec<String> = out.written().iter().map(|p| p.display().to_string()).collect();
    Ok(format!("{summary}\nwrote {}", files.join(", ")))
}

/// Parses `args` (including the program name) and runs the command,
/// printing to stdout/stderr. Returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
