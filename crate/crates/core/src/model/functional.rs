//! Ingredients of the control functional `J = ⟨ψ(T)|O|ψ(T)⟩ − ∫α(t)|E(t)|²dt`.

use super::{PropagationGrid, PulseParameters};
use crate::error::{Error, Result};

/// Trapezoidal `∫ α |E(t)|² dt` on the grid, with constant `α = weight`.
pub fn fluence(pulse: &PulseParameters, grid: &PropagationGrid, weight: f64) -> f64 {
    weight * bare_fluence(pulse, grid)
}

/// Trapezoidal `∫ |E(t)|² dt` on the grid.
pub fn bare_fluence(pulse: &PulseParameters, grid: &PropagationGrid) -> f64 {
    let k = grid.n_steps();
    let mut sum = 0.0;
    for j in 0..=k {
        let e = pulse.field_unchecked(grid.time(j));
        let sq = e[0] * e[0] + e[1] * e[1] + e[2] * e[2];
        sum += if j == 0 || j == k { 0.5 * sq } else { sq };
    }
    sum * grid.dt()
}

/// Trapezoidal `∫ α(t) |E(t)|² dt` with one weight per grid point.
pub fn weighted_fluence(pulse: &PulseParameters, grid: &PropagationGrid, weights: &[f64]) -> Result<f64> {
    let k = grid.n_steps();
    if weights.len() != k + 1 {
        return Err(Error::invalid(format!("expected {} weights, got {}", k + 1, weights.len())));
    }
    let mut sum = 0.0;
    for (j, w) in weights.iter().enumerate() {
        let e = pulse.field_unchecked(grid.time(j));
        let sq = w * (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
        sum += if j == 0 || j == k { 0.5 * sq } else { sq };
    }
    Ok(sum * grid.dt())
}

pub fn objective_j(target_population: f64, pulse: &PulseParameters, grid: &PropagationGrid, weight: f64) -> f64 {
    target_population - fluence(pulse, grid, weight)
}
