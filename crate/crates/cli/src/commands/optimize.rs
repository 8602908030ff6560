use hyqoc::circuit::NoiseModel;
use hyqoc::optimize::{
    evaluate, ga_run, nelder_mead_run, quasi_newton_run, Backend, Evaluation, OptimizationRun, QuasiNewtonOptions,
    Readout,
};
use serde::Serialize;

use crate::config::{ExperimentConfig, Method};
use crate::error::CliError;
use crate::output::Output;

#[derive(Serialize)]
struct Reevaluation {
    backend: String,
    evaluation: Evaluation,
}

#[derive(Serialize)]
struct Summary<'a> {
    optimizer: &'a str,
    backend: &'a str,
    seed: u64,
    iterations: usize,
    evaluations: usize,
    best: &'a Evaluation,
    early_stop_generation: Option<usize>,
    warnings: &'a [String],
    reevaluation: Option<Reevaluation>,
}

/// Runs the configured optimizer and returns the run plus the problem it solved.
pub fn optimize(cfg: &ExperimentConfig) -> Result<(OptimizationRun, hyqoc::model::ControlProblem), CliError> {
    let specs = cfg.backend_specs();
    let spec = match (&cfg.backend, specs.as_slice()) {
        (None, _) => cfg.parse_backend("exact")?,
        (Some(_), [one]) => cfg.parse_backend(one)?,
        _ => return Err(CliError::config("optimize takes exactly one backend")),
    };
    let run = match cfg.optimize.method {
        Method::Ga => {
            let ga = cfg.ga_config()?;
            let problem = cfg.problem(spec.dt, Some(ga.amplitude_clamp))?;
            (ga_run(&problem, &ga, &spec.backend)?, problem)
        }
        Method::NelderMead => {
            let problem = cfg.problem(spec.dt, None)?;
            let guess = cfg.pulse(&problem)?;
            (nelder_mead_run(&problem, &spec.backend, &guess, cfg.optimize.max_iter)?, problem)
        }
        Method::QuasiNewton => {
            let problem = cfg.problem(spec.dt, None)?;
            let guess = cfg.pulse(&problem)?;
            let opts = QuasiNewtonOptions {
                max_iter: cfg.optimize.max_iter,
                h: cfg.optimize.fd_step,
                ..QuasiNewtonOptions::default()
            };
            (quasi_newton_run(&problem, &spec.backend, &guess, &opts)?, problem)
        }
    };
    Ok(run)
}

pub fn run(cfg: &ExperimentConfig, out: &mut Output) -> Result<String, CliError> {
    let (run, problem) = optimize(cfg)?;
    out.csv("history.csv", &run.history_csv())?;
    out.text("best_pulse.json", &format!("{}\n", run.best_pulse.to_json()))?;
    out.text("run.json", &format!("{}\n", run.to_json()))?;

    let reevaluation = match &cfg.optimize.reevaluate {
        Some(spec) => {
            let mut s = cfg.parse_backend(spec)?;
            if let Backend::Circuit { noise, readout, .. } = &mut s.backend {
                *noise = NoiseModel::noiseless();
                *readout = Readout::Exact;
            }
            let mut p = problem.clone();
            p.grid = hyqoc::model::PropagationGrid::covering(cfg.duration, s.dt)?;
            Some(Reevaluation {
                backend: s.backend.to_string(),
                evaluation: evaluate(&p, &run.best_pulse, &s.backend, cfg.seed)?,
            })
        }
        None => None,
    };
    let summary = Summary {
        optimizer: &run.optimizer,
        backend: &run.backend,
        seed: run.seed,
        iterations: run.history.last().map_or(0, |r| r.iteration),
        evaluations: run.evaluations,
        best: &run.best,
        early_stop_generation: run.early_stop_generation,
        warnings: &run.warnings,
        reevaluation,
    };
    out.json("summary.json", &summary)?;
    let mut text = format!(
        "{} on {}: best J {:.6}, target population {:.6}, fluence {:.6e} ({} evaluations)",
        run.optimizer, run.backend, run.best.objective, run.best.target_population, run.best.bare_fluence, run.evaluations
    );
    if let Some(r) = &summary.reevaluation {
        text.push_str(&format!(
            "\nre-evaluated on {}: target population {:.6}",
            r.backend, r.evaluation.target_population
        ));
    }
    for w in &run.warnings {
        text.push_str(&format!("\nwarning: {w}"));
    }
    Ok(text)
}
