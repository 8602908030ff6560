use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{BasisProbabilities, Circuit, DensityMatrix, NoiseModel, StateVector};
use crate::error::{Error, Result};
use crate::export::CsvTable;

/// Measurement outcomes of repeated full-register readout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    n_qubits: usize,
    shots: u64,
    counts: BTreeMap<usize, u64>,
}

impl Histogram {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn count(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    /// Nonzero counts in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(k, v)| (*k, *v))
    }

    /// Bitstring with qubit 0 as the rightmost character.
    pub fn bitstring(&self, index: usize) -> String {
        format!("{index:0width$b}", width = self.n_qubits)
    }

    /// `½ Σ |count/shots − p|` against a reference distribution.
    pub fn total_variation(&self, probabilities: &[f64]) -> f64 {
        let shots = self.shots as f64;
        0.5 * probabilities
            .iter()
            .enumerate()
            .map(|(i, p)| (self.count(i) as f64 / shots - p).abs())
            .sum::<f64>()
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(["bitstring", "count"]);
        for (k, v) in self.iter() {
            t.push(vec![self.bitstring(k), v.to_string()]);
        }
        t
    }
}

impl BasisProbabilities for Histogram {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn probability(&self, index: usize) -> f64 {
        self.count(index) as f64 / self.shots as f64
    }
}

/// Draws `shots` outcomes from a probability vector of length `2^n`.
/// Tiny negative entries from rounding are treated as zero.
pub fn sample_probabilities(n_qubits: usize, probabilities: &[f64], shots: u64, seed: u64) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::invalid("at least one shot is required"));
    }
    if probabilities.len() != 1usize << n_qubits {
        return Err(Error::invalid("probability vector does not match the register"));
    }
    let weights = probabilities.iter().map(|p| p.max(0.0));
    let dist = WeightedIndex::new(weights).map_err(|e| Error::Numerical(format!("cannot sample: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(dist.sample(&mut rng)).or_insert(0) += 1;
    }
    Ok(Histogram {
        n_qubits,
        shots,
        counts,
    })
}

/// Runs `circuit` from `|0…0⟩` and samples its readout. Noise-free circuits
/// use the statevector; otherwise the density-matrix diagonal.
pub fn sample_counts(circuit: &Circuit, noise: &NoiseModel, shots: u64, seed: u64) -> Result<Histogram> {
    let n = circuit.n_qubits();
    let probs = if noise.is_noiseless() {
        let mut psi = StateVector::zero(n)?;
        psi.apply_circuit(circuit)?;
        psi.probabilities()
    } else {
        let mut rho = DensityMatrix::zero(n)?;
        rho.apply_circuit(circuit, noise)?;
        rho.diagonal()
    };
    sample_probabilities(n, &probs, shots, seed)
}
