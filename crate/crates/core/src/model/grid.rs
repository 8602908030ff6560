use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform time grid `t_j = j·Δt`, `j = 0..=K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationGrid {
    dt: f64,
    n_steps: usize,
}

impl PropagationGrid {
    pub fn new(dt: f64, n_steps: usize) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid(format!("time step must be > 0, got {dt}")));
        }
        Ok(Self { dt, n_steps })
    }

    /// Grid covering `[0, duration]`; `dt` must divide the duration to one part in 10⁹.
    pub fn covering(duration: f64, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid(format!("time step must be > 0, got {dt}")));
        }
        let k = (duration / dt).round();
        if (k * dt - duration).abs() > 1e-9 * duration {
            return Err(Error::invalid(format!("dt = {dt} does not divide duration {duration}")));
        }
        Self::new(dt, k as usize)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn duration(&self) -> f64 {
        self.dt * self.n_steps as f64
    }

    pub fn time(&self, j: usize) -> f64 {
        j as f64 * self.dt
    }

    /// All `K+1` grid times.
    pub fn times(&self) -> Vec<f64> {
        (0..=self.n_steps).map(|j| self.time(j)).collect()
    }

    pub fn matches_duration(&self, duration: f64) -> bool {
        (self.duration() - duration).abs() <= 1e-9 * duration
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covering_divides_exactly() {
        let g = PropagationGrid::covering(250.0, 1.0).unwrap();
        assert_eq!(g.n_steps(), 250);
        let g = PropagationGrid::covering(250.0, 0.01).unwrap();
        assert_eq!(g.n_steps(), 25_000);
        assert!(g.matches_duration(250.0));
        assert!(PropagationGrid::covering(250.0, 0.3).is_err());
        assert!(PropagationGrid::covering(250.0, 0.0).is_err());
    }
}
