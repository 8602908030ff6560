use hyqoc::circuit::Circuit;
use hyqoc::encoding::{circuit_trajectory, prepare_state, trotter_step, CircuitVariant};
use hyqoc::export::{num, CsvTable};
use hyqoc::fixtures;
use hyqoc::model::{MolecularSystem, PropagationGrid};
use hyqoc::reference::{max_abs_deviation, propagate_exact};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::Output;

/// Least-squares slope of `ln y` against `ln x`.
pub fn power_law_exponent(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Two-qubit gates in state preparation plus `steps` Trotter steps under a
/// fixed field. The field is constant because only the coupling pattern matters.
pub fn two_qubit_count(system: &MolecularSystem, steps: usize, variant: CircuitVariant) -> Result<usize, CliError> {
    let field = [0.01, 0.01, 0.01];
    let q = system.n_states();
    let step = trotter_step(system, &field, 1.0, variant)?;
    let mut c: Circuit = prepare_state(q, 0)?;
    for _ in 0..steps {
        c.append(&step)?;
    }
    Ok(c.counts().two_qubit)
}

/// `Δε` of the circuit trajectory at each `dt` against the exact
/// propagator on `reference_dt`.
pub fn trotter_errors(cfg: &ExperimentConfig) -> Result<Vec<(f64, f64)>, CliError> {
    let b = &cfg.bench;
    let fine = cfg.problem(b.reference_dt, None)?;
    let pulse = cfg.pulse(&fine)?;
    let reference = propagate_exact(&fine, &pulse, &fine.grid)?;
    b.dts
        .iter()
        .map(|&dt| {
            let problem = cfg.problem(dt, None)?;
            let traj = circuit_trajectory(&problem, &pulse, &problem.grid, cfg.variant)?;
            let truth = reference.resample(&PropagationGrid::covering(cfg.duration, dt)?)?;
            Ok((dt, max_abs_deviation(&traj, &truth)?))
        })
        .collect()
}

#[derive(Serialize)]
struct Summary {
    variant: CircuitVariant,
    trotter_error: Vec<(f64, f64)>,
    two_qubit_exponent_in_steps: f64,
    two_qubit_exponent_in_qubits: f64,
}

pub fn run(cfg: &ExperimentConfig, out: &mut Output) -> Result<String, CliError> {
    let errors = trotter_errors(cfg)?;
    let mut t = CsvTable::new(["dt", "steps", "delta_eps"]);
    for &(dt, d) in &errors {
        t.push(vec![num(dt), ((cfg.duration / dt).round() as usize).to_string(), num(d)]);
    }
    out.csv("trotter_error.csv", &t)?;

    let system = cfg.system()?;
    let mut by_k = Vec::new();
    let mut t = CsvTable::new(["steps", "two_qubit"]);
    for &k in &cfg.bench.steps {
        let n = two_qubit_count(&system, k, cfg.variant)?;
        t.push(vec![k.to_string(), n.to_string()]);
        by_k.push((k as f64, n as f64));
    }
    out.csv("scaling_steps.csv", &t)?;

    let k = cfg.bench.steps.first().copied().unwrap_or(10);
    let mut by_q = Vec::new();
    let mut t = CsvTable::new(["qubits", "steps", "two_qubit"]);
    for &q in &cfg.bench.qubits {
        let s = fixtures::synthetic(q, cfg.seed, true)?;
        let n = two_qubit_count(&s, k, cfg.variant)?;
        t.push(vec![q.to_string(), k.to_string(), n.to_string()]);
        by_q.push((q as f64, n as f64));
    }
    out.csv("scaling_qubits.csv", &t)?;

    let summary = Summary {
        variant: cfg.variant,
        trotter_error: errors,
        two_qubit_exponent_in_steps: power_law_exponent(&by_k),
        two_qubit_exponent_in_qubits: power_law_exponent(&by_q),
    };
    out.json("summary.json", &summary)?;
    let mut text: Vec<String> = summary
        .trotter_error
        .iter()
        .map(|(dt, d)| format!("dt {dt}: Δε {d:.6}"))
        .collect();
    text.push(format!(
        "two-qubit count exponents: {:.3} in steps, {:.3} in qubits ({})",
        summary.two_qubit_exponent_in_steps, summary.two_qubit_exponent_in_qubits, cfg.variant
    ));
    Ok(text.join("\n"))
}
