//! Mapping of the molecular problem onto qubits.
//!
//! Molecular state `k` is the bitstring with only qubit `k` set, so a
//! `Q`-level system needs `Q` qubits and its dynamics stay inside the
//! single-excitation subspace. Each time step becomes a phase layer for the
//! diagonal energies followed by one `XX+YY` exponential per coupled pair.

mod decode;
mod evolve;
mod pauli;
mod synthesis;

pub use decode::{decode_populations, subspace_amplitudes, subspace_unitary, DecodedPopulations};
pub use evolve::{circuit_trajectory, noisy_trace, NoisyStep};
pub use pauli::{pauli_coefficients, PauliCoefficients, ZERO_COUPLING};
pub use synthesis::{
    diagonal_layer, evolution_circuit, gamma_pair, prepare_ground, prepare_state, trotter_step, CircuitVariant,
    PairCircuit,
};
