use nalgebra::DMatrix;

use crate::model::MolecularSystem;

/// Couplings with `|α| <` this are treated as absent.
pub const ZERO_COUPLING: f64 = 1e-14;

/// Pauli-form coefficients of the field-dressed Hamiltonian.
///
/// `theta[k] = e_k − E·μ_kk` weights the occupation of qubit `k`;
/// `alpha[q][p] = E·μ_qp` is the field coupling of the pair. The matrix
/// element of the Hamiltonian between states `q` and `p` is `−alpha[q][p]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliCoefficients {
    pub theta: Vec<f64>,
    alpha: Vec<f64>,
}

impl PauliCoefficients {
    pub fn n_states(&self) -> usize {
        self.theta.len()
    }

    pub fn alpha(&self, q: usize, p: usize) -> f64 {
        self.alpha[q * self.n_states() + p]
    }

    /// Pairs `q < p` in ascending order (q outer) whose coupling is nonzero.
    pub fn active_pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n_states();
        (0..n).flat_map(move |q| {
            (q + 1..n).filter_map(move |p| {
                let a = self.alpha(q, p);
                (a.abs() >= ZERO_COUPLING).then_some((q, p, a))
            })
        })
    }

    /// The `Q×Q` Hamiltonian these coefficients describe.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let n = self.n_states();
        DMatrix::from_fn(n, n, |i, j| if i == j { self.theta[i] } else { -self.alpha(i, j) })
    }
}

pub fn pauli_coefficients(system: &MolecularSystem, field: &[f64; 3]) -> PauliCoefficients {
    let n = system.n_states();
    let projected = |i: usize, j: usize| (0..3).map(|a| field[a] * system.dipole_element(a, i, j)).sum::<f64>();
    let theta = (0..n).map(|k| system.energies()[k] - projected(k, k)).collect();
    let mut alpha = vec![0.0; n * n];
    for q in 0..n {
        for p in 0..n {
            if q != p {
                alpha[q * n + p] = projected(q, p);
            }
        }
    }
    PauliCoefficients { theta, alpha }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn zero_field() {
        let s = fixtures::cyan3_like();
        let c = pauli_coefficients(&s, &[0.0; 3]);
        assert_eq!(c.theta, s.energies());
        assert_eq!(c.active_pairs().count(), 0);
    }

    #[test]
    fn two_level_substitution() {
        let c = pauli_coefficients(&fixtures::two_level(), &[0.01, 0.0, 0.0]);
        assert_eq!(c.alpha(0, 1), 0.01);
        assert_eq!(c.active_pairs().collect::<Vec<_>>(), vec![(0, 1, 0.01)]);
    }

    #[test]
    fn reconstruction_matches_hamiltonian() {
        let s = fixtures::synthetic(5, 9, false).unwrap();
        let field = [0.003, -0.007, 0.02];
        let c = pauli_coefficients(&s, &field);
        let diff = (c.reconstruct() - s.hamiltonian_at(&field)).abs().max();
        assert!(diff < 1e-15, "{diff}");
    }

    #[test]
    fn pairs_are_ascending() {
        let s = fixtures::synthetic(4, 2, true).unwrap();
        let c = pauli_coefficients(&s, &[0.01, 0.01, 0.01]);
        let pairs: Vec<_> = c.active_pairs().map(|(q, p, _)| (q, p)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    }
}
