//! Molecular system, laser field, time grid and control problem.

pub mod functional;
mod grid;
mod problem;
mod pulse;
mod system;

pub use functional::{bare_fluence, fluence, objective_j, weighted_fluence};
pub use grid::PropagationGrid;
pub use problem::{ControlProblem, PenaltyMode};
pub use pulse::{auto_harmonics, PulseFile, PulseParameters, SpectralLine};
pub use system::{MatrixRepr, MolecularSystem, SystemFile, AXES};

/// Field vector of `pulse` at time `t`.
pub fn field_at(pulse: &PulseParameters, t: f64) -> crate::Result<[f64; 3]> {
    pulse.field_at(t)
}

/// Field-dressed Hamiltonian of `system` under `field`.
pub fn hamiltonian_at(system: &MolecularSystem, field: &[f64; 3]) -> nalgebra::DMatrix<f64> {
    system.hamiltonian_at(field)
}
