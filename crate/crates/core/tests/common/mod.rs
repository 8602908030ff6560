//! Dense linear-algebra oracles shared by the integration tests. They build
//! full matrices from textbook definitions and never call the simulator kernels.
#![allow(dead_code)]

use hyqoc::circuit::Gate;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Textbook 2×2 matrix of a single-qubit gate.
pub fn gate_2x2(g: &Gate) -> [[Complex64; 2]; 2] {
    let r = 0.5f64.sqrt();
    match *g {
        Gate::X(_) => [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
        Gate::H(_) => [[c(r, 0.), c(r, 0.)], [c(r, 0.), c(-r, 0.)]],
        Gate::S(_) => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(0., 1.)]],
        Gate::Sdg(_) => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(0., -1.)]],
        Gate::Rz(_, t) => [[c((t / 2.).cos(), -(t / 2.).sin()), c(0., 0.)], [c(0., 0.), c((t / 2.).cos(), (t / 2.).sin())]],
        Gate::Rx(_, t) => [[c((t / 2.).cos(), 0.), c(0., -(t / 2.).sin())], [c(0., -(t / 2.).sin()), c((t / 2.).cos(), 0.)]],
        Gate::Ry(_, t) => [[c((t / 2.).cos(), 0.), c(-(t / 2.).sin(), 0.)], [c((t / 2.).sin(), 0.), c((t / 2.).cos(), 0.)]],
        Gate::Phase(_, p) => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(p.cos(), p.sin())]],
        Gate::Cnot { .. } => unreachable!(),
    }
}

fn bit(i: usize, k: usize) -> usize {
    (i >> k) & 1
}

/// Full `2^n × 2^n` unitary of one gate (qubit 0 = least significant bit).
pub fn dense_gate(g: &Gate, n: usize) -> CMat {
    let dim = 1 << n;
    match *g {
        Gate::Cnot { control, target } => CMat::from_fn(dim, dim, |i, j| {
            let image = if bit(j, control) == 1 { j ^ (1 << target) } else { j };
            if i == image {
                c(1., 0.)
            } else {
                c(0., 0.)
            }
        }),
        _ => {
            let k = g.qubits()[0];
            let m = gate_2x2(g);
            CMat::from_fn(dim, dim, |i, j| {
                if (i ^ j) & !(1 << k) != 0 {
                    c(0., 0.)
                } else {
                    m[bit(i, k)][bit(j, k)]
                }
            })
        }
    }
}

/// Product of the gate unitaries, later gates on the left.
pub fn dense_circuit(gates: &[Gate], n: usize) -> CMat {
    gates
        .iter()
        .fold(CMat::identity(1 << n, 1 << n), |acc, g| dense_gate(g, n) * acc)
}

pub fn pauli(which: char) -> CMat {
    let m = match which {
        'I' => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]],
        'X' => [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
        'Y' => [[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]],
        'Z' => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]],
        _ => unreachable!(),
    };
    CMat::from_fn(2, 2, |i, j| m[i][j])
}

/// Tensor product of single-qubit Paulis; `ops[k]` acts on qubit `k`.
pub fn pauli_string(ops: &[char]) -> CMat {
    // kron puts its left factor on the most significant bits, so iterate
    // from the highest qubit down
    ops.iter()
        .rev()
        .fold(CMat::identity(1, 1), |acc, &o| acc.kronecker(&pauli(o)))
}

/// `exp(−i·H·t)` of a Hermitian matrix through the series-based matrix exponential.
pub fn expm_i(h: &CMat, t: f64) -> CMat {
    (h * c(0., -t)).exp()
}

/// Largest entry-wise distance.
pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Distance after removing the global phase that best aligns `b` with `a`.
pub fn max_diff_up_to_phase(a: &CMat, b: &CMat) -> f64 {
    let overlap: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { c(1., 0.) };
    max_diff(a, &(b * phase))
}

pub fn random_gate(rng: &mut ChaCha8Rng, n: usize) -> Gate {
    let q = rng.random_range(0..n);
    let angle = rng.random_range(-3.2..3.2);
    match rng.random_range(0..9) {
        0 => Gate::X(q),
        1 => Gate::H(q),
        2 => Gate::S(q),
        3 => Gate::Sdg(q),
        4 => Gate::Rz(q, angle),
        5 => Gate::Rx(q, angle),
        6 => Gate::Ry(q, angle),
        7 => Gate::Phase(q, angle),
        _ if n > 1 => {
            let t = (q + rng.random_range(1..n)) % n;
            Gate::Cnot { control: q, target: t }
        }
        _ => Gate::H(q),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn real_to_complex(m: &DMatrix<f64>) -> CMat {
    m.map(|v| c(v, 0.))
}
