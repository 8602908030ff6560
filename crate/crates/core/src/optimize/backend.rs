use std::fmt;

use serde::Serialize;

use crate::circuit::{sample_probabilities, BasisProbabilities, DensityMatrix, NoiseModel, StateVector};
use crate::encoding::{decode_populations, evolution_circuit, CircuitVariant};
use crate::error::{Error, Result};
use crate::model::{bare_fluence, ControlProblem, PulseParameters};
use crate::reference::{propagate_euler, propagate_exact_visit};

/// How the target population is read from a circuit run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Readout {
    /// Exact probability from the simulated state.
    #[default]
    Exact,
    /// Relative frequency over `shots` simulated measurements.
    Sampled { shots: u64 },
}

/// Where the wavefunction at `t = T` comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Backend {
    /// Naive Euler integration with the given fine step.
    ClassicalEuler { dt_fine: f64 },
    /// Exact exponential per step of the problem grid.
    ClassicalExact,
    /// Trotterized circuit on the problem grid. Noise-free runs use the
    /// statevector; noisy runs the density matrix.
    Circuit {
        variant: CircuitVariant,
        noise: NoiseModel,
        readout: Readout,
    },
}

impl Backend {
    pub fn noiseless_circuit(variant: CircuitVariant) -> Self {
        Backend::Circuit {
            variant,
            noise: NoiseModel::noiseless(),
            readout: Readout::Exact,
        }
    }

    /// Whether repeated evaluations at different seeds agree.
    pub fn is_deterministic(&self) -> bool {
        !matches!(
            self,
            Backend::Circuit {
                readout: Readout::Sampled { .. },
                ..
            }
        )
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::ClassicalEuler { dt_fine } => write!(f, "euler(dt={dt_fine})"),
            Backend::ClassicalExact => write!(f, "exact"),
            Backend::Circuit { variant, noise, readout } => {
                write!(f, "circuit({variant}")?;
                if !noise.is_noiseless() {
                    write!(
                        f,
                        ", noise=[bf {} / {}, depol {} / {}]",
                        noise.p_bitflip_1q, noise.p_bitflip_2q, noise.p_depol_1q, noise.p_depol_2q
                    )?;
                }
                if let Readout::Sampled { shots } = readout {
                    write!(f, ", shots={shots}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Outcome of propagating one candidate pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    /// `J = P_target − α·∫|E|²`
    pub objective: f64,
    pub target_population: f64,
    /// Fluence weighted by the problem's effective penalty weight.
    pub fluence: f64,
    /// `∫|E|²` without weight.
    pub bare_fluence: f64,
}

/// Propagates `pulse` with `backend` and scores it. The `seed` only matters
/// for sampled readout; otherwise the result is a pure function of the inputs.
pub fn evaluate(problem: &ControlProblem, pulse: &PulseParameters, backend: &Backend, seed: u64) -> Result<Evaluation> {
    let target = problem.target_state;
    let population = match backend {
        Backend::ClassicalEuler { dt_fine } => propagate_euler(problem, pulse, *dt_fine)?.final_population(target),
        Backend::ClassicalExact => propagate_exact_visit(problem, pulse, &problem.grid, |_, _| ())?[target].norm_sqr(),
        Backend::Circuit { variant, noise, readout } => {
            let circuit = evolution_circuit(problem, pulse, &problem.grid, *variant)?;
            let q = problem.system.n_states();
            let read = |state: &dyn BasisProbabilities, probs: &dyn Fn() -> Vec<f64>| -> Result<f64> {
                match readout {
                    Readout::Exact => Ok(decode_populations(state, q)?.populations[target]),
                    Readout::Sampled { shots } => {
                        let hist = sample_probabilities(q, &probs(), *shots, seed)?;
                        Ok(decode_populations(&hist, q)?.populations[target])
                    }
                }
            };
            if noise.is_noiseless() {
                let mut psi = StateVector::zero(q)?;
                psi.apply_circuit(&circuit)?;
                read(&psi, &|| psi.probabilities())?
            } else {
                let mut rho = DensityMatrix::zero(q)?;
                rho.apply_circuit(&circuit, noise)?;
                read(&rho, &|| rho.diagonal())?
            }
        }
    };
    if !population.is_finite() {
        return Err(Error::Numerical("target population is not finite".into()));
    }
    let bare = bare_fluence(pulse, &problem.grid);
    let fluence = problem.effective_weight() * bare;
    Ok(Evaluation {
        objective: population - fluence,
        target_population: population,
        fluence,
        bare_fluence: bare,
    })
}
