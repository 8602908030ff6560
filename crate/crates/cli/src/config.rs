//! Experiment configuration: a JSON file plus command-line overrides.

use std::path::{Path, PathBuf};

use hyqoc::circuit::NoiseModel;
use hyqoc::encoding::CircuitVariant;
use hyqoc::fixtures;
use hyqoc::model::{auto_harmonics, ControlProblem, MolecularSystem, PenaltyMode, PropagationGrid, PulseParameters};
use hyqoc::optimize::{Backend, GaConfig, Readout};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Everything a command needs. Every field has a default, so an empty
/// object is a valid config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// `fixture:NAME` or a path to a system JSON file.
    pub system: String,
    pub initial_state: usize,
    pub target_state: usize,
    /// Pulse duration `T` in a.u.
    pub duration: f64,
    /// Number of sine harmonics; by default just enough to cover the spectrum.
    pub n_harmonics: Option<usize>,
    pub include_dc: bool,
    /// Step of the problem grid (circuit and exact propagation).
    pub dt: f64,
    /// `guess`, `benchmark`, `zero` or a path to a pulse JSON file.
    pub pulse: String,
    pub penalty_weight: Option<f64>,
    pub penalty_mode: Option<PenaltyMode>,
    pub seed: u64,
    /// Comma-separated backend specs, e.g. `euler:0.01,circuit:1`.
    pub backend: Option<String>,
    pub variant: CircuitVariant,
    /// A preset name or `custom:FILE`.
    pub noise: String,
    pub shots: u64,
    pub readout: ReadoutKind,
    pub propagate: PropagateConfig,
    pub optimize: OptimizeConfig,
    pub noise_study: NoiseStudyConfig,
    pub bench: BenchConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            system: "fixture:cyan3".into(),
            initial_state: 0,
            target_state: 1,
            duration: fixtures::PULSE_DURATION,
            n_harmonics: None,
            include_dc: true,
            dt: fixtures::CIRCUIT_DT,
            pulse: "guess".into(),
            penalty_weight: None,
            penalty_mode: None,
            seed: 0,
            backend: None,
            variant: CircuitVariant::default(),
            noise: "none".into(),
            shots: 2048,
            readout: ReadoutKind::Exact,
            propagate: PropagateConfig::default(),
            optimize: OptimizeConfig::default(),
            noise_study: NoiseStudyConfig::default(),
            bench: BenchConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ReadoutKind {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagateConfig {
    /// Backends compared when no `backend` is given.
    pub backends: Vec<String>,
    /// Largest acceptable population deviation between the first two backends.
    pub threshold: f64,
}

impl Default for PropagateConfig {
    fn default() -> Self {
        Self {
            backends: vec!["euler:0.01".into(), "circuit:1".into()],
            threshold: 0.02,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Ga,
    NelderMead,
    QuasiNewton,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeConfig {
    pub method: Method,
    /// `three-states`, `eleven-states` or `alternating`; ignored when `ga` is set.
    pub ga_preset: String,
    pub ga: Option<GaConfig>,
    /// Iteration budget of the simplex and quasi-Newton optimizers.
    pub max_iter: usize,
    /// Finite-difference step of the quasi-Newton gradient.
    pub fd_step: f64,
    /// Backend spec on which the best pulse is re-evaluated without noise.
    pub reevaluate: Option<String>,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            method: Method::Ga,
            ga_preset: "three-states".into(),
            ga: None,
            max_iter: 100,
            fd_step: 1e-5,
            reevaluate: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseStudyConfig {
    /// Trotter step of the study; the problem `dt` when absent.
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    /// Trotter steps compared against the exact reference.
    pub dts: Vec<f64>,
    /// Step of the exact reference propagation.
    pub reference_dt: f64,
    /// Qubit counts of the gate-scaling sweep (dense synthetic systems).
    pub qubits: Vec<usize>,
    /// Step counts of the gate-scaling sweep.
    pub steps: Vec<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            dts: vec![0.5, 1.0, 2.0, 5.0],
            reference_dt: 0.01,
            qubits: vec![8, 12, 16, 24, 32],
            steps: vec![10, 20, 40, 80, 160],
        }
    }
}

/// Resolves `path` against the directory of the config file it came from.
fn resolve(base: Option<&Path>, path: &str) -> PathBuf {
    let p = Path::new(path);
    match base {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p.to_path_buf(),
    }
}

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))
}

impl ExperimentConfig {
    /// Reads a config file and rewrites its relative paths against the file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read_file(path)?;
        let mut cfg: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let base = path.parent();
        let fix = |s: &mut String, prefix: &str| {
            if let Some(rest) = s.strip_prefix(prefix) {
                *s = format!("{prefix}{}", resolve(base, rest).display());
            }
        };
        if !cfg.system.starts_with("fixture:") {
            cfg.system = resolve(base, &cfg.system).display().to_string();
        }
        if !matches!(cfg.pulse.as_str(), "guess" | "benchmark" | "zero") {
            cfg.pulse = resolve(base, &cfg.pulse).display().to_string();
        }
        fix(&mut cfg.noise, "custom:");
        Ok(cfg)
    }

    pub fn system(&self) -> Result<MolecularSystem, CliError> {
        if let Some(name) = self.system.strip_prefix("fixture:") {
            return fixtures::by_name(name).ok_or_else(|| CliError::config(format!("unknown fixture `{name}`")));
        }
        Ok(MolecularSystem::from_json(&read_file(Path::new(&self.system))?)?)
    }

    pub fn noise_model(&self) -> Result<NoiseModel, CliError> {
        if let Some(path) = self.noise.strip_prefix("custom:") {
            return Ok(NoiseModel::from_json(&read_file(Path::new(path))?)?);
        }
        NoiseModel::preset(&self.noise).ok_or_else(|| CliError::config(format!("unknown noise preset `{}`", self.noise)))
    }

    fn readout(&self) -> Readout {
        match self.readout {
            ReadoutKind::Exact => Readout::Exact,
            ReadoutKind::Sampled => Readout::Sampled { shots: self.shots },
        }
    }

    /// Template pulse for this system: zero amplitudes with the configured shape.
    pub fn template(&self, system: &MolecularSystem, clamp: Option<f64>) -> Result<PulseParameters, CliError> {
        let m = self.n_harmonics.unwrap_or_else(|| auto_harmonics(system, self.duration));
        Ok(PulseParameters::zeros(self.duration, m, self.include_dc)?.with_clamp(clamp)?)
    }

    /// Control problem on a grid of step `dt`. `ga_clamp` selects the GA
    /// penalty defaults (weight 1 plus the clamp); otherwise weight 10, no clamp.
    pub fn problem(&self, dt: f64, ga_clamp: Option<f64>) -> Result<ControlProblem, CliError> {
        let system = self.system()?;
        let (weight, mode) = match ga_clamp {
            Some(_) => (fixtures::GA_PENALTY, PenaltyMode::Both),
            None => (fixtures::REFERENCE_PENALTY, PenaltyMode::Functional),
        };
        let template = self.template(&system, ga_clamp)?;
        let grid = PropagationGrid::covering(self.duration, dt)?;
        let problem = ControlProblem::new(
            system,
            self.target_state,
            template,
            grid,
            self.penalty_weight.unwrap_or(weight),
            self.penalty_mode.unwrap_or(mode),
        )?;
        Ok(problem.with_initial_state(self.initial_state)?)
    }

    /// The pulse named by `pulse`, shaped like the problem template.
    pub fn pulse(&self, problem: &ControlProblem) -> Result<PulseParameters, CliError> {
        let template = &problem.pulse_template;
        let pulse = match self.pulse.as_str() {
            "zero" => template.clone(),
            "guess" => fixtures::guess_pulse(problem)?,
            "benchmark" => {
                let e = problem.system.energies();
                let omega = (e[problem.target_state] - e[problem.initial_state]).abs();
                PulseParameters::resonant_guess(
                    template.duration(),
                    template.n_harmonics(),
                    template.include_dc(),
                    omega,
                    0.004,
                    &[0],
                )?
            }
            path => {
                let p = PulseParameters::from_json(&read_file(Path::new(path))?)?;
                if (p.duration() - self.duration).abs() > 1e-9 * self.duration {
                    return Err(CliError::config(format!(
                        "pulse lasts {} a.u. but the config duration is {}",
                        p.duration(),
                        self.duration
                    )));
                }
                return Ok(p);
            }
        };
        Ok(pulse)
    }

    pub fn backend_specs(&self) -> Vec<String> {
        match &self.backend {
            Some(list) => list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
            None => self.propagate.backends.clone(),
        }
    }

    pub fn parse_backend(&self, spec: &str) -> Result<BackendSpec, CliError> {
        BackendSpec::parse(spec, self.dt, self.variant, self.noise_model()?, self.readout())
    }

    pub fn ga_config(&self) -> Result<GaConfig, CliError> {
        let mut ga = match &self.optimize.ga {
            Some(g) => g.clone(),
            None => GaConfig::preset(&self.optimize.ga_preset, self.seed)
                .ok_or_else(|| CliError::config(format!("unknown GA preset `{}`", self.optimize.ga_preset)))?,
        };
        ga.seed = self.seed;
        ga.validate()?;
        Ok(ga)
    }
}

/// A parsed `--backend` entry: the backend plus the grid step it runs on.
#[derive(Debug, Clone, PartialEq)]
pub struct BackendSpec {
    pub label: String,
    pub backend: Backend,
    /// Step of the grid the results are reported on.
    pub dt: f64,
}

impl BackendSpec {
    /// `euler:DT_FINE`, `exact[:DT]` or `circuit[:DT]`. Euler reports on the
    /// problem grid `default_dt`; the others run on their own step.
    pub fn parse(
        spec: &str,
        default_dt: f64,
        variant: CircuitVariant,
        noise: NoiseModel,
        readout: Readout,
    ) -> Result<Self, CliError> {
        let (kind, arg) = match spec.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (spec, None),
        };
        let value = |what: &str| -> Result<Option<f64>, CliError> {
            arg.map(|a| {
                a.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite() && *v > 0.0)
                    .ok_or_else(|| CliError::config(format!("bad {what} in backend `{spec}`")))
            })
            .transpose()
        };
        let (backend, dt) = match kind {
            "euler" => {
                let fine = value("Euler step")?.unwrap_or(fixtures::EULER_DT);
                (Backend::ClassicalEuler { dt_fine: fine }, default_dt)
            }
            "exact" => (Backend::ClassicalExact, value("time step")?.unwrap_or(default_dt)),
            "circuit" => (
                Backend::Circuit { variant, noise, readout },
                value("time step")?.unwrap_or(default_dt),
            ),
            _ => return Err(CliError::config(format!("unknown backend `{spec}`"))),
        };
        Ok(Self {
            label: spec.to_string(),
            backend,
            dt,
        })
    }
}
