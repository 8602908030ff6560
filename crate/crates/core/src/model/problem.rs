use serde::{Deserialize, Serialize};

use super::{functional, MolecularSystem, PropagationGrid, PulseParameters};
use crate::error::{Error, Result};

/// How the control functional keeps the field small.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PenaltyMode {
    /// Fluence term with weight α in the functional, amplitudes unbounded.
    #[default]
    Functional,
    /// No fluence term; amplitudes bounded by the pulse template's clamp.
    Clamp,
    /// Fluence term and amplitude clamp together.
    Both,
}

/// A population-transfer problem: drive `initial_state` to `target_state`
/// with a pulse shaped like `pulse_template`, propagated on `grid`.
#[derive(Debug, Clone)]
pub struct ControlProblem {
    pub system: MolecularSystem,
    pub initial_state: usize,
    pub target_state: usize,
    pub pulse_template: PulseParameters,
    pub grid: PropagationGrid,
    pub penalty_weight: f64,
    pub penalty_mode: PenaltyMode,
}

impl ControlProblem {
    pub fn new(
        system: MolecularSystem,
        target_state: usize,
        pulse_template: PulseParameters,
        grid: PropagationGrid,
        penalty_weight: f64,
        penalty_mode: PenaltyMode,
    ) -> Result<Self> {
        let problem = Self {
            system,
            initial_state: 0,
            target_state,
            pulse_template,
            grid,
            penalty_weight,
            penalty_mode,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn with_initial_state(mut self, initial: usize) -> Result<Self> {
        self.initial_state = initial;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let q = self.system.n_states();
        if self.target_state >= q || self.initial_state >= q {
            return Err(Error::invalid(format!(
                "state indices ({}, {}) out of range for {q} states",
                self.initial_state, self.target_state
            )));
        }
        if !self.grid.matches_duration(self.pulse_template.duration()) {
            return Err(Error::invalid(format!(
                "grid covers {} a.u. but pulse lasts {} a.u.",
                self.grid.duration(),
                self.pulse_template.duration()
            )));
        }
        if !(self.penalty_weight.is_finite() && self.penalty_weight >= 0.0) {
            return Err(Error::invalid("penalty weight must be >= 0"));
        }
        if matches!(self.penalty_mode, PenaltyMode::Clamp | PenaltyMode::Both)
            && self.pulse_template.amplitude_clamp().is_none()
        {
            return Err(Error::invalid("clamp penalty mode needs an amplitude_clamp on the pulse"));
        }
        Ok(())
    }

    /// Weight actually applied to the fluence term.
    pub fn effective_weight(&self) -> f64 {
        match self.penalty_mode {
            PenaltyMode::Clamp => 0.0,
            PenaltyMode::Functional | PenaltyMode::Both => self.penalty_weight,
        }
    }

    /// Amplitude bound enforced on candidate pulses, if any.
    pub fn clamp(&self) -> Option<f64> {
        match self.penalty_mode {
            PenaltyMode::Functional => None,
            PenaltyMode::Clamp | PenaltyMode::Both => self.pulse_template.amplitude_clamp(),
        }
    }

    /// Control functional for a pulse that produced `target_population`.
    pub fn objective(&self, target_population: f64, pulse: &PulseParameters) -> f64 {
        functional::objective_j(target_population, pulse, &self.grid, self.effective_weight())
    }
}
