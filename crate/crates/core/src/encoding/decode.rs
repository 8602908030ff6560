use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{BasisProbabilities, Circuit, StateVector};
use crate::error::{Error, Result};

/// Molecular-state populations read off a qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodedPopulations {
    /// Probability of the one-hot bitstring of each molecular state.
    pub populations: Vec<f64>,
    /// Probability outside the single-excitation subspace.
    pub leakage: f64,
}

/// Reads the population of state `k` as the probability of the bitstring
/// with only qubit `k` set. Works for statevectors, density matrices and
/// sampled histograms alike.
pub fn decode_populations<S: BasisProbabilities + ?Sized>(state: &S, n_states: usize) -> Result<DecodedPopulations> {
    if state.n_qubits() != n_states {
        return Err(Error::invalid(format!(
            "{} qubits cannot encode {n_states} states",
            state.n_qubits()
        )));
    }
    let populations: Vec<f64> = (0..n_states).map(|k| state.probability(1 << k)).collect();
    let leakage = 1.0 - populations.iter().sum::<f64>();
    Ok(DecodedPopulations { populations, leakage })
}

/// Molecular amplitudes `c_k`: the entries of the one-hot bitstrings.
pub fn subspace_amplitudes(state: &StateVector) -> Vec<Complex64> {
    (0..state.n_qubits()).map(|k| state.amplitudes()[1 << k]).collect()
}

/// The `Q×Q` block of the circuit unitary on the single-excitation subspace:
/// column `j` is the image of the one-hot state `j`, restricted to one-hot states.
pub fn subspace_unitary(circuit: &Circuit) -> Result<DMatrix<Complex64>> {
    let n = circuit.n_qubits();
    let mut u = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut s = StateVector::basis(n, 1 << j)?;
        s.apply_circuit(circuit)?;
        for (i, a) in subspace_amplitudes(&s).into_iter().enumerate() {
            u[(i, j)] = a;
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{DensityMatrix, Gate};
    use crate::encoding::prepare_ground;

    #[test]
    fn prepared_ground_decodes_to_unit_vector() {
        let mut s = StateVector::zero(3).unwrap();
        s.apply_circuit(&prepare_ground(3).unwrap()).unwrap();
        let d = decode_populations(&s, 3).unwrap();
        assert_eq!(d.populations, vec![1.0, 0.0, 0.0]);
        assert_eq!(d.leakage, 0.0);
        assert!(decode_populations(&s, 4).is_err());
    }

    #[test]
    fn maximally_mixed() {
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        let d = decode_populations(&rho, 3).unwrap();
        assert!(d.populations.iter().all(|p| (p - 0.125).abs() < 1e-15));
        assert!((d.leakage - 0.625).abs() < 1e-15);
    }

    #[test]
    fn subspace_block_of_a_swap_like_circuit() {
        // CNOT(0,1) CNOT(1,0) CNOT(0,1) swaps qubits 0 and 1
        let mut c = Circuit::new(2).unwrap();
        for (a, b) in [(0, 1), (1, 0), (0, 1)] {
            c.push(Gate::Cnot { control: a, target: b }).unwrap();
        }
        let u = subspace_unitary(&c).unwrap();
        assert_eq!(u[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(u[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(u[(0, 0)], Complex64::new(0.0, 0.0));
    }
}
