use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::pauli::pauli_coefficients;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::model::{ControlProblem, MolecularSystem, PropagationGrid, PulseParameters};

/// How each pair coupling is turned into gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CircuitVariant {
    /// Full Jordan-Wigner strings: a CNOT ladder runs through every qubit
    /// between the pair, so a string costs `2(p−q)` CNOTs.
    #[serde(rename = "jw-full")]
    JwFull,
    /// Strings restricted to the two qubits of the pair, valid on the
    /// single-excitation subspace. Two CNOTs per string.
    #[default]
    #[serde(rename = "single-occ")]
    SingleOccupancy,
    /// As [`CircuitVariant::SingleOccupancy`], but all `XX` cores of a step
    /// share one basis change and all `YY` cores another.
    #[serde(rename = "single-occ-reordered")]
    SingleOccupancyReordered,
}

impl CircuitVariant {
    pub const ALL: [CircuitVariant; 3] = [
        CircuitVariant::JwFull,
        CircuitVariant::SingleOccupancy,
        CircuitVariant::SingleOccupancyReordered,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CircuitVariant::JwFull => "jw-full",
            CircuitVariant::SingleOccupancy => "single-occ",
            CircuitVariant::SingleOccupancyReordered => "single-occ-reordered",
        }
    }
}

impl fmt::Display for CircuitVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CircuitVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown circuit variant `{s}`")))
    }
}

/// Which Pauli pair a string exponential acts with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Basis {
    X,
    Y,
}

fn basis_in(c: &mut Circuit, q: usize, b: Basis) -> Result<()> {
    if b == Basis::Y {
        c.push(Gate::Sdg(q))?;
    }
    c.push(Gate::H(q))
}

fn basis_out(c: &mut Circuit, q: usize, b: Basis) -> Result<()> {
    c.push(Gate::H(q))?;
    if b == Basis::Y {
        c.push(Gate::S(q))?;
    }
    Ok(())
}

/// `exp(−i·angle/2 · Z_q Z_p)` for the two-qubit form, or with every qubit
/// strictly between `q` and `p` included in the parity when `ladder` is set.
fn zz_core(c: &mut Circuit, q: usize, p: usize, angle: f64, ladder: bool) -> Result<()> {
    let chain: Vec<usize> = if ladder { (q..=p).collect() } else { vec![q, p] };
    for w in chain.windows(2) {
        c.push(Gate::Cnot {
            control: w[0],
            target: w[1],
        })?;
    }
    c.push(Gate::Rz(p, angle))?;
    for w in chain.windows(2).rev() {
        c.push(Gate::Cnot {
            control: w[0],
            target: w[1],
        })?;
    }
    Ok(())
}

/// Single X on qubit `initial` applied to `|0…0⟩`: the one-hot encoding of
/// that molecular state.
pub fn prepare_state(n_qubits: usize, initial: usize) -> Result<Circuit> {
    let mut c = Circuit::new(n_qubits)?;
    c.push(Gate::X(initial))?;
    Ok(c)
}

/// Encoding of the molecular ground state: the bitstring with only qubit 0 set.
pub fn prepare_ground(n_qubits: usize) -> Result<Circuit> {
    prepare_state(n_qubits, 0)
}

/// `exp(−i Σ_k θ_k n_k Δt)` with `n_k = |1⟩⟨1|` on qubit `k`, as one phase
/// gate per qubit.
pub fn diagonal_layer(theta: &[f64], dt: f64) -> Result<Circuit> {
    if !(dt > 0.0) {
        return Err(Error::invalid("time step must be positive"));
    }
    let mut c = Circuit::new(theta.len())?;
    for (k, t) in theta.iter().enumerate() {
        c.push(Gate::Phase(k, -t * dt))?;
    }
    Ok(c)
}

/// Gates of one pair coupling.
#[derive(Debug, Clone, PartialEq)]
pub enum PairCircuit {
    Full(Circuit),
    /// The bare `XX` and `YY` cores, to be wrapped in shared basis changes.
    Fragments { x: Circuit, y: Circuit },
}

impl PairCircuit {
    /// Full circuit; fragments are wrapped in their own basis changes.
    pub fn into_circuit(self, q: usize, p: usize) -> Result<Circuit> {
        match self {
            PairCircuit::Full(c) => Ok(c),
            PairCircuit::Fragments { x, y } => {
                let mut c = Circuit::new(x.n_qubits())?;
                for (core, b) in [(x, Basis::X), (y, Basis::Y)] {
                    basis_in(&mut c, q, b)?;
                    basis_in(&mut c, p, b)?;
                    c.append(&core)?;
                    basis_out(&mut c, q, b)?;
                    basis_out(&mut c, p, b)?;
                }
                Ok(c)
            }
        }
    }
}

/// `exp(−i·coupling·Δt·(X_qX_p + Y_qY_p)/2)` on an `n_qubits` register.
///
/// On the single-excitation subspace this rotates amplitude between the
/// states `q` and `p` with matrix element `coupling`.
pub fn gamma_pair(
    n_qubits: usize,
    q: usize,
    p: usize,
    coupling: f64,
    dt: f64,
    variant: CircuitVariant,
) -> Result<PairCircuit> {
    if q >= p {
        return Err(Error::invalid(format!("pair ({q}, {p}) must have q < p")));
    }
    if p >= n_qubits {
        return Err(Error::invalid(format!("pair ({q}, {p}) outside {n_qubits} qubits")));
    }
    if !coupling.is_finite() {
        return Err(Error::invalid("coupling must be finite"));
    }
    let angle = coupling * dt;
    let ladder = variant == CircuitVariant::JwFull;
    if variant == CircuitVariant::SingleOccupancyReordered {
        let mut x = Circuit::new(n_qubits)?;
        zz_core(&mut x, q, p, angle, false)?;
        let mut y = Circuit::new(n_qubits)?;
        zz_core(&mut y, q, p, angle, false)?;
        return Ok(PairCircuit::Fragments { x, y });
    }
    let mut c = Circuit::new(n_qubits)?;
    for b in [Basis::X, Basis::Y] {
        basis_in(&mut c, q, b)?;
        basis_in(&mut c, p, b)?;
        zz_core(&mut c, q, p, angle, ladder)?;
        basis_out(&mut c, q, b)?;
        basis_out(&mut c, p, b)?;
    }
    Ok(PairCircuit::Full(c))
}

/// One first-order Trotter step: the diagonal layer, then every coupled pair
/// in ascending `(q, p)` order.
pub fn trotter_step(system: &MolecularSystem, field: &[f64; 3], dt: f64, variant: CircuitVariant) -> Result<Circuit> {
    let coeffs = pauli_coefficients(system, field);
    let n = system.n_states();
    let mut c = diagonal_layer(&coeffs.theta, dt)?;
    let pairs: Vec<(usize, usize, f64)> = coeffs.active_pairs().collect();
    if variant != CircuitVariant::SingleOccupancyReordered {
        for &(q, p, alpha) in &pairs {
            let pair = gamma_pair(n, q, p, -alpha, dt, variant)?;
            c.append(&pair.into_circuit(q, p)?)?;
        }
        return Ok(c);
    }
    let mut involved: Vec<usize> = pairs.iter().flat_map(|&(q, p, _)| [q, p]).collect();
    involved.sort_unstable();
    involved.dedup();
    let mut x_cores = Vec::with_capacity(pairs.len());
    let mut y_cores = Vec::with_capacity(pairs.len());
    for &(q, p, alpha) in &pairs {
        match gamma_pair(n, q, p, -alpha, dt, variant)? {
            PairCircuit::Fragments { x, y } => {
                x_cores.push(x);
                y_cores.push(y);
            }
            PairCircuit::Full(_) => unreachable!("reordered variant yields fragments"),
        }
    }
    for (cores, b) in [(x_cores, Basis::X), (y_cores, Basis::Y)] {
        for &k in &involved {
            basis_in(&mut c, k, b)?;
        }
        for core in &cores {
            c.append(core)?;
        }
        for &k in &involved {
            basis_out(&mut c, k, b)?;
        }
    }
    Ok(c)
}

/// State preparation followed by one Trotter step per grid interval, with the
/// field sampled at each interval's left endpoint. A zero-step grid yields
/// the preparation alone. Step marks delimit the
/// intervals so `prefix(j)` propagates to `t_j`.
pub fn evolution_circuit(
    problem: &ControlProblem,
    pulse: &PulseParameters,
    grid: &PropagationGrid,
    variant: CircuitVariant,
) -> Result<Circuit> {
    if grid.n_steps() > 0 && !grid.matches_duration(pulse.duration()) {
        return Err(Error::invalid("grid does not cover the pulse duration"));
    }
    let system = &problem.system;
    let mut c = prepare_state(system.n_states(), problem.initial_state)?;
    for j in 0..grid.n_steps() {
        c.mark_step();
        let field = pulse.field_unchecked(grid.time(j));
        c.append(&trotter_step(system, &field, grid.dt(), variant)?)?;
    }
    Ok(c)
}
