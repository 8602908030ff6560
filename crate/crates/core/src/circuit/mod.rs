//! Gate-level circuits and their emulation.
//!
//! Statevectors are exact for closed systems. Density matrices carry the
//! gate-noise channels of [`NoiseModel`] and act as the oracle for any
//! sampled readout.

mod gate;
mod kernels;
mod noise;
mod program;
mod sampling;
mod state;

pub use gate::{Gate, Mat2};
pub use noise::{NoiseModel, PRESET_NAMES};
pub use program::{Circuit, GateCounts};
pub use sampling::{sample_counts, sample_probabilities, Histogram};
pub use state::{
    apply_density, apply_statevector, fidelity_to_pure, BasisProbabilities, DensityMatrix, StateVector,
    MAX_DENSITY_QUBITS, MAX_STATEVECTOR_QUBITS,
};
