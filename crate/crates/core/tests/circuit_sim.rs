mod common;

use common::*;
use hyqoc::circuit::*;
use hyqoc::encoding::{decode_populations, evolution_circuit, CircuitVariant};
use hyqoc::fixtures;
use hyqoc::model::PropagationGrid;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

fn random_circuit(seed: u64, n: usize, len: usize) -> Circuit {
    let mut r = rng(seed);
    let mut circuit = Circuit::new(n).unwrap();
    for _ in 0..len {
        circuit.push(random_gate(&mut r, n)).unwrap();
    }
    circuit
}

fn random_state(seed: u64, n: usize) -> StateVector {
    use rand::Rng;
    let mut r = rng(seed);
    let v: Vec<Complex64> = (0..1 << n)
        .map(|_| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(v.into_iter().map(|z| z / norm).collect()).unwrap()
}

fn as_matrix(rho: &DensityMatrix) -> CMat {
    let d = rho.dim();
    CMat::from_fn(d, d, |i, j| rho.get(i, j))
}

#[test]
fn statevector_matches_dense_product() {
    for seed in 0..10 {
        let circuit = random_circuit(seed, 3, 50);
        let psi = random_state(100 + seed, 3);
        let out = apply_statevector(&circuit, &psi).unwrap();
        let dense = dense_circuit(circuit.gates(), 3) * DVector::from_column_slice(psi.amplitudes());
        let diff = out
            .amplitudes()
            .iter()
            .zip(dense.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-10, "seed {seed}: {diff}");
        assert!((out.norm() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn noiseless_density_matches_statevector() {
    for (seed, n) in [(1u64, 1usize), (2, 2), (3, 3), (4, 4), (5, 5)] {
        let circuit = random_circuit(seed, n, 200);
        let psi = random_state(seed + 50, n);
        let out = apply_statevector(&circuit, &psi).unwrap();
        let rho = apply_density(&circuit, &DensityMatrix::from_pure(&psi).unwrap(), &NoiseModel::noiseless()).unwrap();
        let a = DVector::from_column_slice(out.amplitudes());
        let expect = &a * a.adjoint();
        let diff = max_diff(&as_matrix(&rho), &expect);
        assert!(diff < 1e-10, "n={n}: {diff}");
    }
}

#[test]
fn noisy_channels_keep_a_valid_density_matrix() {
    let noise = NoiseModel::new(0.03, 0.05, 0.02, 0.04).unwrap();
    let mut rho = DensityMatrix::from_pure(&random_state(9, 3)).unwrap();
    let mut r = rng(77);
    let mut applications = 0;
    while applications < 10_000 {
        let g = random_gate(&mut r, 3);
        applications += 2 * g.arity();
        rho.apply_gate(&g, &noise).unwrap();
    }
    assert!((rho.trace() - c(1.0, 0.0)).norm() < 1e-8, "{}", rho.trace());
    assert!(rho.hermiticity_error() < 1e-10);
    let m = as_matrix(&rho);
    let eig = m.symmetric_eigenvalues();
    assert!(eig.iter().all(|l| *l > -1e-8), "{eig}");
}

#[test]
fn depolarized_purity_follows_closed_form() {
    // Each application shrinks the Bloch vector of a single qubit by (1 − p),
    // so purity after k gates is (1 + (1 − p)^{2k}) / 2.
    let p = 0.05;
    let noise = NoiseModel::new(0.0, 0.0, p, 0.0).unwrap();
    let mut rho = DensityMatrix::zero(1).unwrap();
    let mut prev = 1.0;
    for k in 1..=20 {
        rho.apply_gate(&Gate::Rx(0, 0.3), &noise).unwrap();
        let purity = rho.purity();
        assert!(purity < prev, "purity must drop at gate {k}");
        assert!((purity - 0.5 * (1.0 + (1.0 - p).powi(2 * k))).abs() < 1e-12);
        prev = purity;
    }
    assert!(prev > 0.5);
}

#[test]
fn fidelity_decays_monotonically_on_identity_circuit() {
    let noise = NoiseModel::new(0.01, 0.02, 0.01, 0.02).unwrap();
    let mut circuit = Circuit::new(3).unwrap();
    circuit.push(Gate::X(0)).unwrap();
    let mut psi = StateVector::zero(3).unwrap();
    psi.apply_circuit(&circuit).unwrap();
    let mut rho = DensityMatrix::zero(3).unwrap();
    rho.apply_circuit(&circuit, &NoiseModel::noiseless()).unwrap();
    let mut prev = fidelity_to_pure(&psi, &rho).unwrap();
    for step in 0..60 {
        let q = step % 3;
        for g in [Gate::X(q), Gate::X(q), Gate::Cnot { control: q, target: (q + 1) % 3 }, Gate::Cnot { control: q, target: (q + 1) % 3 }] {
            rho.apply_gate(&g, &noise).unwrap();
        }
        let f = fidelity_to_pure(&psi, &rho).unwrap();
        assert!(f <= prev + 1e-9, "step {step}: {f} > {prev}");
        assert!((0.0..=1.0 + 1e-8).contains(&f));
        prev = f;
    }
    assert!(prev < 0.9);
}

#[test]
fn sampled_histogram_converges_to_density_diagonal() {
    let problem = fixtures::reference_problem(fixtures::cyan3_like()).unwrap();
    let pulse = fixtures::guess_pulse(&problem).unwrap();
    let circuit = evolution_circuit(&problem, &pulse, &problem.grid, CircuitVariant::SingleOccupancy)
        .unwrap()
        .prefix(10);
    let noise = NoiseModel::mixed();
    let mut rho = DensityMatrix::zero(3).unwrap();
    rho.apply_circuit(&circuit, &noise).unwrap();
    let h = sample_counts(&circuit, &noise, 2048, 11).unwrap();
    assert_eq!(h.shots(), 2048);
    let tvd = h.total_variation(&rho.diagonal());
    assert!(tvd < 0.05, "{tvd}");
    assert_eq!(h, sample_counts(&circuit, &noise, 2048, 11).unwrap());
    let pops = decode_populations(&h, 3).unwrap();
    assert!((pops.populations.iter().sum::<f64>() + pops.leakage - 1.0).abs() < 1e-12);
}

#[test]
fn strong_noise_reaches_the_thermal_floor() {
    let noise = NoiseModel::new(0.2, 0.2, 0.2, 0.2).unwrap();
    let mut rho = DensityMatrix::zero(3).unwrap();
    for k in 0..300 {
        rho.apply_gate(&Gate::H(k % 3), &noise).unwrap();
        rho.apply_gate(&Gate::Cnot { control: k % 3, target: (k + 1) % 3 }, &noise).unwrap();
    }
    let psi = StateVector::zero(3).unwrap();
    let f = fidelity_to_pure(&psi, &rho).unwrap();
    assert!((f - 0.125).abs() < 1e-6, "{f}");
}

#[test]
fn evolution_circuit_dump_roundtrip() {
    let problem = fixtures::reference_problem(fixtures::cyan3_like()).unwrap();
    let pulse = fixtures::guess_pulse(&problem).unwrap();
    let grid = PropagationGrid::covering(pulse.duration(), 25.0).unwrap();
    for v in CircuitVariant::ALL {
        let circuit = evolution_circuit(&problem, &pulse, &grid, v).unwrap();
        let text = circuit.dump();
        let back = Circuit::parse(&text).unwrap();
        assert_eq!(back.n_steps(), circuit.n_steps());
        let a = apply_statevector(&circuit, &StateVector::zero(3).unwrap()).unwrap();
        let b = apply_statevector(&back, &StateVector::zero(3).unwrap()).unwrap();
        let diff = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-14, "{v}: {diff}");
    }
}

#[test]
fn density_limit_is_a_resource_error() {
    assert!(matches!(DensityMatrix::zero(11), Err(hyqoc::Error::Resource(_))));
    assert!(DensityMatrix::zero(6).is_ok());
    let _unused: DMatrix<f64> = DMatrix::zeros(1, 1);
}
