use std::collections::BTreeMap;

use hyqoc::circuit::{sample_probabilities, DensityMatrix};
use hyqoc::encoding::{circuit_trajectory, decode_populations, evolution_circuit};
use hyqoc::export::{num, CsvTable};
use hyqoc::optimize::{Backend, Readout};
use hyqoc::reference::{propagate_euler, propagate_exact};
use serde::Serialize;

use super::slug;
use crate::config::{BackendSpec, ExperimentConfig};
use crate::error::CliError;
use crate::output::Output;

/// Population traces of one backend.
pub struct PopulationTrace {
    pub times: Vec<f64>,
    pub populations: Vec<Vec<f64>>,
}

impl PopulationTrace {
    fn to_csv(&self) -> CsvTable {
        let q = self.populations.first().map_or(0, Vec::len);
        let mut t = CsvTable::new(std::iter::once("time".to_string()).chain((0..q).map(|k| format!("P{k}"))));
        for (time, row) in self.times.iter().zip(&self.populations) {
            let mut cells = vec![num(*time)];
            cells.extend(row.iter().map(|v| num(*v)));
            t.push(cells);
        }
        t
    }
}

/// Propagates the config pulse with `spec`.
pub fn trace(cfg: &ExperimentConfig, spec: &BackendSpec) -> Result<PopulationTrace, CliError> {
    let problem = cfg.problem(spec.dt, None)?;
    let pulse = cfg.pulse(&problem)?;
    let amplitudes = match spec.backend {
        Backend::ClassicalEuler { dt_fine } => Some(propagate_euler(&problem, &pulse, dt_fine)?),
        Backend::ClassicalExact => Some(propagate_exact(&problem, &pulse, &problem.grid)?),
        Backend::Circuit { variant, noise, readout } if noise.is_noiseless() && readout == Readout::Exact => {
            Some(circuit_trajectory(&problem, &pulse, &problem.grid, variant)?)
        }
        Backend::Circuit { .. } => None,
    };
    if let Some(t) = amplitudes {
        return Ok(PopulationTrace {
            populations: t.populations(),
            times: t.times,
        });
    }
    let Backend::Circuit { variant, noise, readout } = spec.backend else {
        unreachable!("classical backends handled above")
    };
    let circuit = evolution_circuit(&problem, &pulse, &problem.grid, variant)?;
    let q = problem.system.n_states();
    let mut rho = DensityMatrix::zero(q)?;
    rho.apply_circuit(&circuit.prefix(0), &noise)?;
    let mut times = Vec::with_capacity(circuit.n_steps() + 1);
    let mut populations = Vec::with_capacity(circuit.n_steps() + 1);
    for j in 0..=circuit.n_steps() {
        if j > 0 {
            rho.apply_circuit(&circuit.step(j - 1).expect("step exists"), &noise)?;
        }
        let pops = match readout {
            Readout::Exact => decode_populations(&rho, q)?.populations,
            Readout::Sampled { shots } => {
                let h = sample_probabilities(q, &rho.diagonal(), shots, cfg.seed.wrapping_add(j as u64))?;
                decode_populations(&h, q)?.populations
            }
        };
        times.push(problem.grid.time(j));
        populations.push(pops);
    }
    Ok(PopulationTrace { times, populations })
}

/// `max_k |P_a,k − P_b,k|` at every time both traces share.
pub fn deviation(a: &PopulationTrace, b: &PopulationTrace) -> Result<Vec<(f64, f64)>, CliError> {
    let mut out = Vec::new();
    let mut j = 0;
    for (t, pa) in a.times.iter().zip(&a.populations) {
        while j < b.times.len() && b.times[j] < t - 1e-9 {
            j += 1;
        }
        if j < b.times.len() && (b.times[j] - t).abs() <= 1e-9 {
            let d = pa.iter().zip(&b.populations[j]).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            out.push((*t, d));
        }
    }
    if out.is_empty() {
        return Err(CliError::config("backends share no output times"));
    }
    Ok(out)
}

#[derive(Serialize)]
struct Summary {
    backends: Vec<String>,
    final_populations: BTreeMap<String, Vec<f64>>,
    /// Largest deviation of each further backend from the first one.
    max_deviation: BTreeMap<String, f64>,
    threshold: f64,
    threshold_exceeded: bool,
}

pub fn run(cfg: &ExperimentConfig, out: &mut Output) -> Result<String, CliError> {
    let specs = cfg
        .backend_specs()
        .iter()
        .map(|s| cfg.parse_backend(s))
        .collect::<Result<Vec<_>, _>>()?;
    if specs.is_empty() {
        return Err(CliError::config("no backend given"));
    }
    let traces = specs.iter().map(|s| trace(cfg, s)).collect::<Result<Vec<_>, _>>()?;
    let mut final_populations = BTreeMap::new();
    for (spec, t) in specs.iter().zip(&traces) {
        out.csv(&format!("populations_{}.csv", slug(&spec.label)), &t.to_csv())?;
        final_populations.insert(spec.label.clone(), t.populations.last().cloned().unwrap_or_default());
    }
    let mut max_deviation = BTreeMap::new();
    if traces.len() > 1 {
        let mut table = CsvTable::new(
            std::iter::once("time".to_string()).chain(specs[1..].iter().map(|s| format!("delta_{}", s.label))),
        );
        // every trace is compared with the first at the times they share
        let devs = traces[1..]
            .iter()
            .map(|t| deviation(&traces[0], t))
            .collect::<Result<Vec<_>, _>>()?;
        let mut times: Vec<f64> = devs.iter().flat_map(|d| d.iter().map(|p| p.0)).collect();
        times.sort_by(f64::total_cmp);
        times.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
        for &t in &times {
            let mut row = vec![num(t)];
            for d in &devs {
                let v = d.iter().find(|p| (p.0 - t).abs() <= 1e-9);
                row.push(v.map_or(String::new(), |p| num(p.1)));
            }
            table.push(row);
        }
        out.csv("deviation.csv", &table)?;
        for (spec, d) in specs[1..].iter().zip(&devs) {
            let m = d.iter().map(|p| p.1).fold(0.0, f64::max);
            max_deviation.insert(spec.label.clone(), m);
        }
    }
    let worst = max_deviation.values().copied().fold(0.0, f64::max);
    let summary = Summary {
        backends: specs.iter().map(|s| s.label.clone()).collect(),
        final_populations,
        max_deviation,
        threshold: cfg.propagate.threshold,
        threshold_exceeded: worst >= cfg.propagate.threshold,
    };
    out.json("summary.json", &summary)?;
    let mut text = String::new();
    for (label, pops) in &summary.final_populations {
        text.push_str(&format!("{label}: final populations {pops:?}\n"));
    }
    for (label, d) in &summary.max_deviation {
        text.push_str(&format!("max Δε vs {}: {label} {d:.6}\n", summary.backends[0]));
    }
    if summary.threshold_exceeded {
        text.push_str(&format!("threshold {} exceeded\n", summary.threshold));
    }
    Ok(text.trim_end().to_string())
}
