use serde::Serialize;

use super::Evaluation;
use crate::export::{num, CsvTable};
use crate::model::{PulseFile, PulseParameters};

/// Best-so-far statistics after one optimizer iteration (a GA generation,
/// a simplex step, or a quasi-Newton update).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub best_j: f64,
    pub best_population: f64,
    pub best_fluence: f64,
    pub best_bare_fluence: f64,
    /// Mean `J` over the current population or simplex.
    pub mean_j: f64,
    /// Cumulative number of pulse evaluations.
    pub evaluations: usize,
    /// Phase label for scheduled optimizers.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<String>,
    /// Full `3×(M+1)` amplitudes of the best pulse, row-major.
    pub best_amplitudes: Vec<f64>,
}

impl IterationRecord {
    pub(crate) fn new(
        iteration: usize,
        best: &Evaluation,
        best_pulse: &PulseParameters,
        mean_j: f64,
        evaluations: usize,
        phase: Option<String>,
    ) -> Self {
        Self {
            iteration,
            best_j: best.objective,
            best_population: best.target_population,
            best_fluence: best.fluence,
            best_bare_fluence: best.bare_fluence,
            mean_j,
            evaluations,
            phase,
            best_amplitudes: best_pulse.flat_amplitudes(),
        }
    }
}

/// Everything an optimizer produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationRun {
    pub optimizer: String,
    pub backend: String,
    pub seed: u64,
    pub evaluations: usize,
    pub history: Vec<IterationRecord>,
    #[serde(serialize_with = "serialize_pulse")]
    pub best_pulse: PulseParameters,
    pub best: Evaluation,
    pub warnings: Vec<String>,
    /// Generation at which a GA reached its population threshold and
    /// skipped ahead to its final phase.
    pub early_stop_generation: Option<usize>,
}

fn serialize_pulse<S: serde::Serializer>(p: &PulseParameters, s: S) -> Result<S::Ok, S::Error> {
    let file: PulseFile = p.to_file();
    file.serialize(s)
}

impl OptimizationRun {
    /// `iteration,best_J,best_population,best_fluence` followed by the
    /// unweighted fluence, the mean `J` and the evaluation count.
    pub fn history_csv(&self) -> CsvTable {
        let mut t = CsvTable::new([
            "iteration",
            "best_J",
            "best_population",
            "best_fluence",
            "best_bare_fluence",
            "mean_J",
            "evaluations",
            "phase",
        ]);
        for r in &self.history {
            t.push(vec![
                r.iteration.to_string(),
                num(r.best_j),
                num(r.best_population),
                num(r.best_fluence),
                num(r.best_bare_fluence),
                num(r.mean_j),
                r.evaluations.to_string(),
                r.phase.clone().unwrap_or_default(),
            ]);
        }
        t
    }

    pub fn final_population(&self) -> f64 {
        self.best.target_population
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run serializes")
    }
}
