use hyqoc::encoding::{evolution_circuit, noisy_trace, CircuitVariant};
use hyqoc::export::{num, CsvTable};
use hyqoc::model::PropagationGrid;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::Output;

#[derive(Serialize)]
struct Summary {
    variant: CircuitVariant,
    noise: String,
    steps: usize,
    final_fidelity: f64,
    thermal_floor: f64,
    final_populations: Vec<f64>,
    final_leakage: f64,
}

/// Two-qubit gate counts of every variant, at every prefix length of `steps`.
pub fn gate_count_table(cfg: &ExperimentConfig, dt: f64, prefixes: &[usize]) -> Result<CsvTable, CliError> {
    let problem = cfg.problem(dt, None)?;
    let pulse = cfg.pulse(&problem)?;
    let mut t = CsvTable::new(["variant", "steps", "one_qubit", "two_qubit", "total"]);
    for v in CircuitVariant::ALL {
        let circuit = evolution_circuit(&problem, &pulse, &problem.grid, v)?;
        for &k in prefixes {
            let c = circuit.prefix(k.min(circuit.n_steps())).counts();
            t.push(vec![
                v.name().to_string(),
                k.to_string(),
                c.one_qubit.to_string(),
                c.two_qubit.to_string(),
                c.total().to_string(),
            ]);
        }
    }
    Ok(t)
}

pub fn run(cfg: &ExperimentConfig, out: &mut Output) -> Result<String, CliError> {
    let dt = cfg.noise_study.dt.unwrap_or(cfg.dt);
    let problem = cfg.problem(dt, None)?;
    let pulse = cfg.pulse(&problem)?;
    let noise = cfg.noise_model()?;
    let grid = PropagationGrid::covering(cfg.duration, dt)?;
    let trace = noisy_trace(&problem, &pulse, &grid, cfg.variant, &noise)?;
    let q = problem.system.n_states();

    let mut fid = CsvTable::new(["step", "time", "fidelity", "purity"]);
    let mut pops = CsvTable::new(
        ["step".to_string(), "time".to_string()]
            .into_iter()
            .chain((0..q).map(|k| format!("P{k}")))
            .chain(std::iter::once("leakage".to_string())),
    );
    for s in &trace {
        fid.push(vec![s.step.to_string(), num(s.time), num(s.fidelity), num(s.purity)]);
        let mut row = vec![s.step.to_string(), num(s.time)];
        row.extend(s.populations.iter().map(|v| num(*v)));
        row.push(num(s.leakage));
        pops.push(row);
    }
    out.csv("fidelity.csv", &fid)?;
    out.csv("populations.csv", &pops)?;
    let k = grid.n_steps();
    let prefixes: Vec<usize> = (0..=k).step_by((k / 10).max(1)).chain(std::iter::once(k)).collect();
    let mut prefixes = prefixes;
    prefixes.dedup();
    out.csv("gate_counts.csv", &gate_count_table(cfg, dt, &prefixes)?)?;

    let last = trace.last().expect("trace has the initial point");
    let summary = Summary {
        variant: cfg.variant,
        noise: cfg.noise.clone(),
        steps: k,
        final_fidelity: last.fidelity,
        thermal_floor: 1.0 / (1u64 << q) as f64,
        final_populations: last.populations.clone(),
        final_leakage: last.leakage,
    };
    out.json("summary.json", &summary)?;
    Ok(format!(
        "{} steps of {} under `{}`: final fidelity {:.6} (thermal floor {:.6})",
        k, cfg.variant, cfg.noise, last.fidelity, summary.thermal_floor
    ))
}
