use num_complex::Complex64;

use super::kernels::{apply_1q, apply_cnot, bit_flip, conj, depolarize, for_each_block};
use super::{Circuit, Gate, NoiseModel};
use crate::error::{Error, Result};

/// Largest register the statevector simulator accepts.
pub const MAX_STATEVECTOR_QUBITS: usize = 26;
/// Largest register the density-matrix simulator accepts (`4^n` entries).
pub const MAX_DENSITY_QUBITS: usize = 10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Anything that assigns a probability to each computational basis state.
pub trait BasisProbabilities {
    fn n_qubits(&self) -> usize;
    fn probability(&self, index: usize) -> f64;
}

/// A pure state of `n` qubits; bit `k` of an amplitude's index is qubit `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_STATEVECTOR_QUBITS {
            return Err(Error::Resource(format!(
                "statevector supports 1..={MAX_STATEVECTOR_QUBITS} qubits, got {n_qubits}"
            )));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::invalid(format!("basis index {index} out of range")));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Self { n_qubits, amplitudes })
    }

    /// Wraps amplitudes whose length is a power of two and whose norm is 1.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::invalid(format!("{dim} amplitudes is not a qubit register")));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if n_qubits > MAX_STATEVECTOR_QUBITS {
            return Err(Error::Resource(format!("{n_qubits} qubits exceed the statevector bound")));
        }
        let s = Self { n_qubits, amplitudes };
        if (s.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("state norm {} is not 1", s.norm())));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match *gate {
            Gate::Cnot { control, target } => apply_cnot(&mut self.amplitudes, control, target),
            _ => apply_1q(&mut self.amplitudes, gate.qubits()[0], &gate.matrix().expect("single-qubit gate")),
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::Circuit(format!(
                "{}-qubit circuit applied to a {}-qubit state",
                circuit.n_qubits(),
                self.n_qubits
            )));
        }
        circuit.gates().iter().try_for_each(|g| self.apply_gate(g))
    }
}

impl BasisProbabilities for StateVector {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }
}

/// Applies `circuit` to a copy of `input`.
pub fn apply_statevector(circuit: &Circuit, input: &StateVector) -> Result<StateVector> {
    let mut out = input.clone();
    out.apply_circuit(circuit)?;
    Ok(out)
}

/// A mixed state stored as a row-major `2^n × 2^n` buffer.
///
/// Viewed as a `2n`-bit index, the low `n` bits select the column and the
/// high `n` bits the row, so a gate `U` on qubit `k` is `U` on bit `n+k` and
/// `conj(U)` on bit `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    fn check_size(n_qubits: usize) -> Result<()> {
        if n_qubits == 0 || n_qubits > MAX_DENSITY_QUBITS {
            return Err(Error::Resource(format!(
                "density matrix supports 1..={MAX_DENSITY_QUBITS} qubits, got {n_qubits}"
            )));
        }
        Ok(())
    }

    /// `|0…0⟩⟨0…0|`
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::check_size(n_qubits)?;
        let mut data = vec![ZERO; 1usize << (2 * n_qubits)];
        data[0] = ONE;
        Ok(Self { n_qubits, data })
    }

    /// `|ψ⟩⟨ψ|`
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        Self::check_size(psi.n_qubits())?;
        let a = psi.amplitudes();
        let data = a.iter().flat_map(|r| a.iter().map(move |c| r * c.conj())).collect();
        Ok(Self {
            n_qubits: psi.n_qubits(),
            data,
        })
    }

    /// `I / 2^n`
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        Self::check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self { n_qubits, data })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// `Tr(ρ²)`, which for Hermitian `ρ` is the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i).re).collect()
    }

    /// Largest `|ρ_ij − conj(ρ_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Applies the ideal gate, then its noise channels on each acted qubit.
    pub fn apply_gate(&mut self, gate: &Gate, noise: &NoiseModel) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let n = self.n_qubits;
        match *gate {
            Gate::Cnot { control, target } => {
                apply_cnot(&mut self.data, n + control, n + target);
                apply_cnot(&mut self.data, control, target);
            }
            _ => {
                let q = gate.qubits()[0];
                let m = gate.matrix().expect("single-qubit gate");
                apply_1q(&mut self.data, n + q, &m);
                apply_1q(&mut self.data, q, &conj(&m));
            }
        }
        let (p_flip, p_depol) = noise.for_arity(gate.arity());
        for q in gate.qubits() {
            if p_flip > 0.0 {
                for_each_block(&mut self.data, n + q, q, |b| bit_flip(b, p_flip));
            }
            if p_depol > 0.0 {
                for_each_block(&mut self.data, n + q, q, |b| depolarize(b, p_depol));
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit, noise: &NoiseModel) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::Circuit(format!(
                "{}-qubit circuit applied to a {}-qubit density matrix",
                circuit.n_qubits(),
                self.n_qubits
            )));
        }
        circuit.gates().iter().try_for_each(|g| self.apply_gate(g, noise))
    }
}

impl BasisProbabilities for DensityMatrix {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn probability(&self, index: usize) -> f64 {
        self.get(index, index).re
    }
}

/// Applies `circuit` under `noise` to a copy of `input`.
pub fn apply_density(circuit: &Circuit, input: &DensityMatrix, noise: &NoiseModel) -> Result<DensityMatrix> {
    let mut out = input.clone();
    out.apply_circuit(circuit, noise)?;
    Ok(out)
}

/// `⟨ψ|ρ|ψ⟩`
pub fn fidelity_to_pure(reference: &StateVector, rho: &DensityMatrix) -> Result<f64> {
    if reference.n_qubits() != rho.n_qubits() {
        return Err(Error::invalid("state and density matrix sizes differ"));
    }
    let psi = reference.amplitudes();
    let d = rho.dim();
    let mut acc = ZERO;
    for (i, pi) in psi.iter().enumerate() {
        let row: Complex64 = (0..d).map(|j| rho.data[i * d + j] * psi[j]).sum();
        acc += pi.conj() * row;
    }
    Ok(acc.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_on_qubit_zero_sets_lsb() {
        let mut s = StateVector::zero(3).unwrap();
        s.apply_gate(&Gate::X(0)).unwrap();
        assert_eq!(s.amplitudes()[1], ONE);
        assert!(s.apply_gate(&Gate::X(3)).is_err());
    }

    #[test]
    fn cnot_truth_table() {
        for (input, output) in [(0b00, 0b00), (0b01, 0b11), (0b10, 0b10), (0b11, 0b01)] {
            let mut s = StateVector::basis(2, input).unwrap();
            s.apply_gate(&Gate::Cnot { control: 0, target: 1 }).unwrap();
            assert_eq!(s.amplitudes()[output], ONE, "{input:02b}");
        }
    }

    #[test]
    fn empty_circuit_is_identity() {
        let s = StateVector::from_amplitudes(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
        assert_eq!(apply_statevector(&Circuit::new(1).unwrap(), &s).unwrap(), s);
    }

    #[test]
    fn size_limits() {
        assert!(matches!(DensityMatrix::zero(MAX_DENSITY_QUBITS + 1), Err(Error::Resource(_))));
        assert!(matches!(StateVector::zero(0), Err(Error::Resource(_))));
        assert!(StateVector::from_amplitudes(vec![ONE; 3]).is_err());
        assert!(StateVector::from_amplitudes(vec![ONE; 2]).is_err());
    }

    #[test]
    fn deterministic_bit_flip_undoes_x() {
        let mut rho = DensityMatrix::zero(1).unwrap();
        let noise = NoiseModel::new(1.0, 0.0, 0.0, 0.0).unwrap();
        rho.apply_gate(&Gate::X(0), &noise).unwrap();
        assert_eq!(rho.get(0, 0), ONE);
        assert_eq!(rho.get(1, 1), ZERO);
    }

    #[test]
    fn purity_of_repeated_depolarization() {
        // For a pure qubit depolarized n times, the Bloch vector shrinks by
        // (1−p)^n, so the purity is (1 + (1−p)^{2n}) / 2.
        let p = 0.05;
        let noise = NoiseModel::new(0.0, 0.0, p, 0.0).unwrap();
        let mut rho = DensityMatrix::zero(1).unwrap();
        let mut last = rho.purity();
        for n in 1..=20 {
            rho.apply_gate(&Gate::H(0), &noise).unwrap();
            let purity = rho.purity();
            let expect = 0.5 * (1.0 + (1.0 - p).powi(2 * n));
            assert!((purity - expect).abs() < 1e-12, "n={n}: {purity} vs {expect}");
            assert!(purity < last && purity > 0.5);
            last = purity;
        }
    }

    #[test]
    fn fidelity_examples() {
        let mut psi = StateVector::zero(3).unwrap();
        psi.apply_gate(&Gate::H(1)).unwrap();
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        assert!((fidelity_to_pure(&psi, &rho).unwrap() - 1.0).abs() < 1e-14);
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        assert!((fidelity_to_pure(&psi, &mixed).unwrap() - 0.125).abs() < 1e-15);
        let mut orth = StateVector::zero(3).unwrap();
        orth.apply_gate(&Gate::X(2)).unwrap();
        assert!(fidelity_to_pure(&orth, &rho).unwrap().abs() < 1e-15);
    }
}
