mod common;

use common::*;
use hyqoc::circuit::{apply_statevector, Circuit, Gate, StateVector};
use hyqoc::encoding::*;
use hyqoc::fixtures;
use hyqoc::model::{MolecularSystem, PropagationGrid};
use hyqoc::reference::propagate_exact;

fn field() -> [f64; 3] {
    [0.012, -0.007, 0.004]
}

/// Dense `exp(−iHΔt)` restricted to one Trotter step, in the molecular basis.
fn exact_step(system: &MolecularSystem, f: &[f64; 3], dt: f64) -> CMat {
    expm_i(&real_to_complex(&system.hamiltonian_at(f)), dt)
}

/// Diagonal exponential first, then one 2×2 rotation per coupled pair in
/// ascending order, each built densely from the Hamiltonian entries.
fn trotter_product(system: &MolecularSystem, f: &[f64; 3], dt: f64) -> CMat {
    let h = system.hamiltonian_at(f);
    let q = system.n_states();
    let mut diag = CMat::zeros(q, q);
    for k in 0..q {
        diag[(k, k)] = c(h[(k, k)], 0.0);
    }
    let mut u = expm_i(&diag, dt);
    for a in 0..q {
        for b in a + 1..q {
            if h[(a, b)].abs() < ZERO_COUPLING {
                continue;
            }
            let mut pair = CMat::zeros(q, q);
            pair[(a, b)] = c(h[(a, b)], 0.0);
            pair[(b, a)] = c(h[(a, b)], 0.0);
            u = expm_i(&pair, dt) * u;
        }
    }
    u
}

fn step_unitary(system: &MolecularSystem, f: &[f64; 3], dt: f64, v: CircuitVariant) -> CMat {
    subspace_unitary(&trotter_step(system, f, dt, v).unwrap()).unwrap()
}

#[test]
fn pair_circuit_matches_dense_exponential() {
    for n in 2..=4 {
        for q in 0..n {
            for p in q + 1..n {
                let generator = (pauli_string(&ops(n, q, p, 'X')) + pauli_string(&ops(n, q, p, 'Y'))) * c(0.5, 0.0);
                let expect = expm_i(&generator, 0.37 * 1.3);
                for v in [CircuitVariant::SingleOccupancy, CircuitVariant::SingleOccupancyReordered] {
                    let circuit = gamma_pair(n, q, p, 0.37, 1.3, v).unwrap().into_circuit(q, p).unwrap();
                    let got = dense_circuit(circuit.gates(), n);
                    assert!(max_diff(&got, &expect) < 1e-12, "n={n} ({q},{p}) {v}");
                }
            }
        }
    }
}

fn ops(n: usize, q: usize, p: usize, which: char) -> Vec<char> {
    (0..n).map(|k| if k == q || k == p { which } else { 'I' }).collect()
}

#[test]
fn jordan_wigner_pair_carries_the_parity_string() {
    let n = 4;
    let (q, p) = (0, 3);
    let mut xs = ops(n, q, p, 'X');
    let mut ys = ops(n, q, p, 'Y');
    for k in q + 1..p {
        xs[k] = 'Z';
        ys[k] = 'Z';
    }
    let generator = (pauli_string(&xs) + pauli_string(&ys)) * c(0.5, 0.0);
    let expect = expm_i(&generator, 0.21 * 0.9);
    let got = dense_circuit(
        gamma_pair(n, q, p, 0.21, 0.9, CircuitVariant::JwFull).unwrap().into_circuit(q, p).unwrap().gates(),
        n,
    );
    assert!(max_diff(&got, &expect) < 1e-12);
}

#[test]
fn zero_coupling_is_identity_and_spares_empty_and_doubly_filled_states() {
    let id = CMat::identity(4, 4);
    let zero = gamma_pair(2, 0, 1, 0.0, 1.0, CircuitVariant::SingleOccupancy).unwrap().into_circuit(0, 1).unwrap();
    assert!(max_diff(&dense_circuit(zero.gates(), 2), &id) < 1e-12);
    let u = dense_circuit(
        gamma_pair(2, 0, 1, 0.8, 1.0, CircuitVariant::SingleOccupancy).unwrap().into_circuit(0, 1).unwrap().gates(),
        2,
    );
    for k in [0b00, 0b11] {
        assert!((u[(k, k)] - c(1.0, 0.0)).norm() < 1e-12);
    }
    assert!(gamma_pair(2, 1, 0, 0.1, 1.0, CircuitVariant::SingleOccupancy).is_err());
}

#[test]
fn one_step_from_the_ground_state_is_close_to_exact() {
    // peak field of the propagator benchmark pulse
    let s = fixtures::cyan3_like();
    let f = [0.004, 0.0, 0.0];
    let expect = exact_step(&s, &f, 1.0);
    for v in CircuitVariant::ALL {
        let u = step_unitary(&s, &f, 1.0, v);
        let err = (0..3).map(|i| (u[(i, 0)] - expect[(i, 0)]).norm()).fold(0.0, f64::max);
        assert!(err < 1e-3, "{v}: {err}");
    }
}

#[test]
fn single_step_error_shrinks_quadratically() {
    // Over a fixed time the first-order product error is linear in Δt; the
    // error of one step is quadratic.
    let s = fixtures::cyan3_like();
    let f = [0.05, 0.03, 0.01];
    for v in CircuitVariant::ALL {
        let e1 = max_diff(&step_unitary(&s, &f, 2.0, v), &exact_step(&s, &f, 2.0));
        let e2 = max_diff(&step_unitary(&s, &f, 1.0, v), &exact_step(&s, &f, 1.0));
        let ratio = e1 / e2;
        assert!((3.0..5.0).contains(&ratio), "{v}: {ratio}");
    }
}

#[test]
fn halving_the_step_halves_the_trajectory_error() {
    let problem = fixtures::reference_problem(fixtures::cyan3_like()).unwrap();
    let pulse = fixtures::guess_pulse(&problem).unwrap();
    let error = |dt: f64| {
        let grid = PropagationGrid::covering(pulse.duration(), dt).unwrap();
        let exact = propagate_exact(&problem, &pulse, &grid).unwrap();
        let circuit = evolution_circuit(&problem, &pulse, &grid, CircuitVariant::SingleOccupancy).unwrap();
        let psi = apply_statevector(&circuit, &StateVector::zero(3).unwrap()).unwrap();
        subspace_amplitudes(&psi)
            .iter()
            .zip(exact.final_state())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    };
    let ratio = error(2.0) / error(1.0);
    assert!((1.6..2.5).contains(&ratio), "{ratio}");
}

#[test]
fn zero_field_gives_pure_phases() {
    let s = fixtures::cyan3_like();
    for v in CircuitVariant::ALL {
        let u = step_unitary(&s, &[0.0; 3], 2.5, v);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { c(0.0, -s.energies()[i] * 2.5).exp() } else { c(0.0, 0.0) };
                assert!((u[(i, j)] - expect).norm() < 1e-8, "{v} ({i},{j})");
            }
        }
    }
}

#[test]
fn exact_variants_do_not_leak() {
    let problem = fixtures::reference_problem(fixtures::cyan3_like()).unwrap();
    let pulse = fixtures::benchmark_pulse(&problem.system).unwrap();
    let pulse = problem.pulse_template.with_flat_amplitudes(&pulse.flat_amplitudes()).unwrap();
    for v in [CircuitVariant::JwFull, CircuitVariant::SingleOccupancy] {
        let circuit = evolution_circuit(&problem, &pulse, &problem.grid, v).unwrap();
        let psi = apply_statevector(&circuit, &StateVector::zero(3).unwrap()).unwrap();
        let d = decode_populations(&psi, 3).unwrap();
        assert!(d.leakage.abs() <= 1e-9, "{v}: {}", d.leakage);
    }
}

#[test]
fn reordered_leakage_is_second_order() {
    let s = fixtures::synthetic(4, 3, true).unwrap();
    let f = [0.03, 0.02, 0.01];
    let leak = |dt: f64| {
        let mut psi = StateVector::basis(4, 1).unwrap();
        psi.apply_circuit(&trotter_step(&s, &f, dt, CircuitVariant::SingleOccupancyReordered).unwrap())
            .unwrap();
        decode_populations(&psi, 4).unwrap().leakage
    };
    let (a, b) = (leak(1.0), leak(0.5));
    assert!(a > 0.0 && a < 1e-2, "{a}");
    // leaked probability is the square of an O(Δt²) amplitude
    assert!(a / b > 8.0, "{a} / {b}");
}

#[test]
fn full_and_single_occupancy_agree_on_the_subspace() {
    for q in 2..=5 {
        let s = fixtures::synthetic(q, 40 + q as u64, true).unwrap();
        let f = field();
        let a = step_unitary(&s, &f, 0.8, CircuitVariant::JwFull);
        let b = step_unitary(&s, &f, 0.8, CircuitVariant::SingleOccupancy);
        assert!(max_diff(&a, &b) < 1e-12, "Q={q}");
    }
}

#[test]
fn projected_step_equals_the_pairwise_product() {
    for (q, dense) in [(3, true), (4, false), (5, true)] {
        let s = fixtures::synthetic(q, 7 + q as u64, dense).unwrap();
        let f = [0.02, -0.015, 0.01];
        let expect = trotter_product(&s, &f, 1.5);
        for v in [CircuitVariant::JwFull, CircuitVariant::SingleOccupancy] {
            let got = step_unitary(&s, &f, 1.5, v);
            assert!(max_diff(&got, &expect) < 1e-10, "Q={q} {v}");
        }
    }
}

#[test]
fn pauli_coefficients_reconstruct_the_hamiltonian() {
    let s = fixtures::synthetic(5, 2, false).unwrap();
    let coeffs = pauli_coefficients(&s, &field());
    let h = s.hamiltonian_at(&field());
    assert!((coeffs.reconstruct() - &h).abs().max() < 1e-15);
    for (q, p, alpha) in coeffs.active_pairs() {
        assert!(q < p);
        assert_eq!(alpha, -h[(q, p)]);
    }
}

fn cnots(c: &Circuit) -> usize {
    c.gates().iter().filter(|g| matches!(g, Gate::Cnot { .. })).count()
}

#[test]
fn gate_counts_follow_the_pair_structure() {
    let q = 5;
    let s = fixtures::synthetic(q, 11, true).unwrap();
    let f = field();
    let pairs: Vec<(usize, usize)> = pauli_coefficients(&s, &f).active_pairs().map(|(a, b, _)| (a, b)).collect();
    assert_eq!(pairs.len(), q * (q - 1) / 2);

    let single = trotter_step(&s, &f, 1.0, CircuitVariant::SingleOccupancy).unwrap();
    assert_eq!(cnots(&single), 4 * pairs.len());
    // per pair: 4 H + RZ for XX, 4 basis changes of two gates + H... spelled out:
    // XX uses H,H / RZ / H,H and YY uses Sdg,H,Sdg,H / RZ / H,S,H,S
    assert_eq!(single.counts().one_qubit, q + 14 * pairs.len());

    let full = trotter_step(&s, &f, 1.0, CircuitVariant::JwFull).unwrap();
    let ladder: usize = pairs.iter().map(|(a, b)| 4 * (b - a)).sum();
    assert_eq!(cnots(&full), ladder);
    assert_eq!(full.counts().one_qubit, single.counts().one_qubit);

    let reordered = trotter_step(&s, &f, 1.0, CircuitVariant::SingleOccupancyReordered).unwrap();
    assert_eq!(cnots(&reordered), 4 * pairs.len());
    // shared basis changes: 2 H per qubit for XX and 4 gates per qubit for YY
    assert_eq!(reordered.counts().one_qubit, q + 2 * pairs.len() + 6 * q);
    assert!(reordered.len() < single.len());
}

#[test]
fn empty_grid_yields_only_preparation() {
    let problem = fixtures::reference_problem(fixtures::cyan3_like()).unwrap();
    let pulse = fixtures::guess_pulse(&problem).unwrap();
    let grid = PropagationGrid::new(1.0, 0).unwrap();
    let circuit = evolution_circuit(&problem, &pulse, &grid, CircuitVariant::SingleOccupancy).unwrap();
    assert_eq!(circuit.gates(), &[Gate::X(0)]);
    assert_eq!(circuit.n_steps(), 0);
}
