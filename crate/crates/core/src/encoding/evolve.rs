//! Step-by-step execution of evolution circuits, for traces over time.

use serde::Serialize;

use super::{decode_populations, evolution_circuit, subspace_amplitudes, CircuitVariant};
use crate::circuit::{fidelity_to_pure, DensityMatrix, NoiseModel, StateVector};
use crate::error::Result;
use crate::model::{ControlProblem, PropagationGrid, PulseParameters};
use crate::reference::WavefunctionTrajectory;

/// Runs the noise-free evolution circuit and records the molecular
/// amplitudes after every step, on the same grid as the classical propagators.
pub fn circuit_trajectory(
    problem: &ControlProblem,
    pulse: &PulseParameters,
    grid: &PropagationGrid,
    variant: CircuitVariant,
) -> Result<WavefunctionTrajectory> {
    let circuit = evolution_circuit(problem, pulse, grid, variant)?;
    let q = problem.system.n_states();
    let mut psi = StateVector::zero(q)?;
    psi.apply_circuit(&circuit.prefix(0))?;
    let mut times = vec![0.0];
    let mut states = vec![subspace_amplitudes(&psi)];
    for j in 0..circuit.n_steps() {
        psi.apply_circuit(&circuit.step(j).expect("step exists"))?;
        times.push(grid.time(j + 1));
        states.push(subspace_amplitudes(&psi));
    }
    Ok(WavefunctionTrajectory { times, states })
}

/// State of a noisy run after a number of Trotter steps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoisyStep {
    pub step: usize,
    pub time: f64,
    /// `⟨ψ|ρ|ψ⟩` against the noise-free state after the same steps.
    pub fidelity: f64,
    pub purity: f64,
    pub populations: Vec<f64>,
    pub leakage: f64,
}

/// Evolves the noise-free statevector and the noisy density matrix side by
/// side and reports one [`NoisyStep`] per prefix length `0..=K`.
pub fn noisy_trace(
    problem: &ControlProblem,
    pulse: &PulseParameters,
    grid: &PropagationGrid,
    variant: CircuitVariant,
    noise: &NoiseModel,
) -> Result<Vec<NoisyStep>> {
    let circuit = evolution_circuit(problem, pulse, grid, variant)?;
    let q = problem.system.n_states();
    let mut rho = DensityMatrix::zero(q)?;
    let mut psi = StateVector::zero(q)?;
    let prep = circuit.prefix(0);
    psi.apply_circuit(&prep)?;
    rho.apply_circuit(&prep, noise)?;
    let mut out = Vec::with_capacity(circuit.n_steps() + 1);
    let mut record = |j: usize, psi: &StateVector, rho: &DensityMatrix| -> Result<()> {
        let decoded = decode_populations(rho, q)?;
        out.push(NoisyStep {
            step: j,
            time: grid.time(j),
            fidelity: fidelity_to_pure(psi, rho)?,
            purity: rho.purity(),
            populations: decoded.populations,
            leakage: decoded.leakage,
        });
        Ok(())
    };
    record(0, &psi, &rho)?;
    for j in 0..circuit.n_steps() {
        let step = circuit.step(j).expect("step exists");
        psi.apply_circuit(&step)?;
        rho.apply_circuit(&step, noise)?;
        record(j + 1, &psi, &rho)?;
    }
    Ok(out)
}
