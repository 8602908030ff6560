//! Browser bindings for three demo operations on the bundled three-level
//! system. Every export takes plain numbers and returns a JSON string; the
//! `*_json` functions hold the logic and also run natively.

use hyqoc::circuit::NoiseModel;
use hyqoc::encoding::{circuit_trajectory, noisy_trace, CircuitVariant};
use hyqoc::fixtures;
use hyqoc::model::{ControlProblem, PenaltyMode, PropagationGrid};
use hyqoc::optimize::{ga_run, Backend, GaConfig, GaPhase};
use hyqoc::reference::{deviation_trace, propagate_euler};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const EULER_DT: f64 = 0.01;

fn err(e: hyqoc::Error) -> String {
    e.to_string()
}

#[derive(Serialize)]
struct Comparison {
    times: Vec<f64>,
    euler: Vec<Vec<f64>>,
    circuit: Vec<Vec<f64>>,
    deviation: Vec<f64>,
    max_deviation: f64,
    two_qubit_gates: usize,
}

/// Resonant x pulse of the given amplitude, propagated with fine-step Euler
/// and with the single-occupancy circuit at step `dt`.
pub fn compare_json(amplitude: f64, dt: f64) -> Result<String, String> {
    let system = fixtures::cyan3_like();
    let mut pulse = fixtures::benchmark_pulse(&system).map_err(err)?;
    let j = pulse.nearest_harmonic(system.energies()[1] - system.energies()[0]);
    pulse.set_amplitude(0, j, amplitude).map_err(err)?;
    let grid = PropagationGrid::covering(pulse.duration(), dt).map_err(err)?;
    let template = pulse.with_flat_amplitudes(&vec![0.0; pulse.flat_amplitudes().len()]).map_err(err)?;
    let problem = ControlProblem::new(system, 1, template, grid, 1.0, PenaltyMode::Functional).map_err(err)?;
    let variant = CircuitVariant::SingleOccupancy;
    let euler = propagate_euler(&problem, &pulse, EULER_DT).map_err(err)?;
    let circuit = circuit_trajectory(&problem, &pulse, &problem.grid, variant).map_err(err)?;
    let deviation = deviation_trace(&euler, &circuit).map_err(err)?;
    let gates = hyqoc::encoding::evolution_circuit(&problem, &pulse, &problem.grid, variant).map_err(err)?;
    let out = Comparison {
        max_deviation: deviation.iter().copied().fold(0.0, f64::max),
        times: circuit.times.clone(),
        euler: euler.populations(),
        circuit: circuit.populations(),
        deviation,
        two_qubit_gates: gates.counts().two_qubit,
    };
    Ok(serde_json::to_string(&out).expect("serializable"))
}

#[derive(Serialize)]
struct NoiseCurve {
    steps: Vec<usize>,
    fidelity: Vec<f64>,
    purity: Vec<f64>,
    leakage: Vec<f64>,
    thermal_floor: f64,
}

/// Fidelity of the noisy guess-pulse circuit to its noise-free counterpart
/// after every Trotter step, for bit-flip and depolarizing probabilities
/// applied after each gate.
pub fn noise_json(bit_flip: f64, depolarizing: f64) -> Result<String, String> {
    let noise = NoiseModel::new(bit_flip, 2.0 * bit_flip, depolarizing, 2.0 * depolarizing).map_err(err)?;
    let problem = fixtures::reference_problem(fixtures::cyan3_like()).map_err(err)?;
    let pulse = fixtures::guess_pulse(&problem).map_err(err)?;
    let trace = noisy_trace(&problem, &pulse, &problem.grid, CircuitVariant::SingleOccupancy, &noise).map_err(err)?;
    let out = NoiseCurve {
        steps: trace.iter().map(|s| s.step).collect(),
        fidelity: trace.iter().map(|s| s.fidelity).collect(),
        purity: trace.iter().map(|s| s.purity).collect(),
        leakage: trace.iter().map(|s| s.leakage).collect(),
        thermal_floor: 1.0 / 8.0,
    };
    Ok(serde_json::to_string(&out).expect("serializable"))
}

#[derive(Serialize)]
struct GaSummary {
    best_population: Vec<f64>,
    mean_objective: Vec<f64>,
    final_population: f64,
    evaluations: usize,
    omega: Vec<f64>,
    /// `|a_j|` per harmonic for the x, y and z components of the best pulse.
    spectrum: [Vec<f64>; 3],
}

/// A genetic-algorithm run on the classical backend with `generations`
/// exploration plus as many convergence generations.
pub fn ga_json(seed: u32, generations: u32, population: u32) -> Result<String, String> {
    let (g, n) = (generations.max(1) as usize, population.max(4) as usize);
    let problem = fixtures::ga_problem(fixtures::cyan3_like()).map_err(err)?;
    let config = GaConfig {
        phases: vec![GaPhase::exploration(g, n), GaPhase::convergence(g, n)],
        selected_count: (n / 4).max(2),
        ..GaConfig::three_states(seed.into())
    };
    let run = ga_run(&problem, &config, &Backend::ClassicalExact).map_err(err)?;
    let p = &run.best_pulse;
    let omega = (0..=p.n_harmonics()).map(|j| p.omega(j)).collect();
    let spectrum = std::array::from_fn(|axis| (0..=p.n_harmonics()).map(|j| p.amplitude(axis, j).abs()).collect());
    let out = GaSummary {
        best_population: run.history.iter().map(|r| r.best_population).collect(),
        mean_objective: run.history.iter().map(|r| r.mean_j).collect(),
        final_population: run.final_population(),
        evaluations: run.evaluations,
        omega,
        spectrum,
    };
    Ok(serde_json::to_string(&out).expect("serializable"))
}

#[wasm_bindgen]
pub fn compare_propagators(amplitude: f64, dt: f64) -> Result<String, JsValue> {
    compare_json(amplitude, dt).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn noise_fidelity(bit_flip: f64, depolarizing: f64) -> Result<String, JsValue> {
    noise_json(bit_flip, depolarizing).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn optimize_pulse(seed: u32, generations: u32, population: u32) -> Result<String, JsValue> {
    ga_json(seed, generations, population).map_err(|e| JsValue::from_str(&e))
}
