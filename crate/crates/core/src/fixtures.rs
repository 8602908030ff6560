//! Bundled model systems and problem presets.
//!
//! The shipped systems are synthetic: energies and dipoles are chosen to give
//! a molecule-like level structure (a strong ground→first-excited transition
//! near 0.125 hartree, planar dipoles with a weak z component), not taken
//! from any quantum-chemistry calculation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::Result;
use crate::model::{auto_harmonics, ControlProblem, MolecularSystem, PenaltyMode, PropagationGrid, PulseParameters};

const CYAN3_LIKE: &str = include_str!("../data/cyan3_like.json");
const CYAN11_LIKE: &str = include_str!("../data/cyan11_like.json");
const TWO_LEVEL: &str = include_str!("../data/two_level.json");

/// Pulse length used by the bundled presets (a.u.).
pub const PULSE_DURATION: f64 = 250.0;
/// Trotter step of the circuit propagation (a.u.).
pub const CIRCUIT_DT: f64 = 1.0;
/// Step of the reference Euler integrator (a.u.).
pub const EULER_DT: f64 = 0.01;
/// Amplitude bound used with the genetic algorithm (a.u.).
pub const GA_CLAMP: f64 = 0.005;
/// Fluence weight for the gradient-based and simplex optimizers.
pub const REFERENCE_PENALTY: f64 = 10.0;
/// Fluence weight for the genetic algorithm (which also clamps).
pub const GA_PENALTY: f64 = 1.0;

/// Three levels: ground state plus two excited states at 0.125 and 0.18 hartree.
pub fn cyan3_like() -> MolecularSystem {
    MolecularSystem::from_json(CYAN3_LIKE).expect("bundled system is valid")
}

/// Eleven levels whose lowest three coincide with [`cyan3_like`].
pub fn cyan11_like() -> MolecularSystem {
    MolecularSystem::from_json(CYAN11_LIKE).expect("bundled system is valid")
}

/// Two levels 0.125 hartree apart with a unit x transition dipole.
pub fn two_level() -> MolecularSystem {
    MolecularSystem::from_json(TWO_LEVEL).expect("bundled system is valid")
}

/// Looks up a bundled system by name.
pub fn by_name(name: &str) -> Option<MolecularSystem> {
    match name {
        "cyan3" | "cyan3-like" | "cyan3_like" => Some(cyan3_like()),
        "cyan11" | "cyan11-like" | "cyan11_like" => Some(cyan11_like()),
        "two-level" | "two_level" => Some(two_level()),
        _ => None,
    }
}

/// Random `n`-level system with energies spread over `[0.1, 0.35]` hartree
/// above the ground state. With `dense` every dipole element is nonzero;
/// otherwise roughly half of the off-diagonal couplings are zeroed.
pub fn synthetic(n_states: usize, seed: u64, dense: bool) -> Result<MolecularSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut energies: Vec<f64> = (1..n_states).map(|_| rng.random_range(0.1..0.35)).collect();
    energies.sort_by(f64::total_cmp);
    energies.insert(0, 0.0);
    let normal = Normal::new(0.0, 0.8).expect("valid normal");
    let mut dipole: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; n_states * n_states]);
    for (axis, mu) in dipole.iter_mut().enumerate() {
        let scale = if axis == 2 { 0.1 } else { 1.0 };
        for i in 0..n_states {
            for j in i..n_states {
                let mut v: f64 = scale * normal.sample(&mut rng);
                if dense {
                    if v.abs() < 1e-3 {
                        v = 1e-3f64.copysign(v);
                    }
                } else if i != j && rng.random_bool(0.5) {
                    v = 0.0;
                }
                mu[i * n_states + j] = v;
                mu[j * n_states + i] = v;
            }
        }
    }
    MolecularSystem::new(energies, dipole)
}

/// Compresses the spectrum above the first excited state so the highest
/// level sits at `top_energy`, keeping the ground and first excited state fixed.
pub fn scaled_spectrum(system: &MolecularSystem, top_energy: f64) -> Result<MolecularSystem> {
    let e = system.energies();
    let q = e.len();
    let (e1, emax) = (e[1], e[q - 1]);
    let factor = if emax > e1 { (top_energy - e1) / (emax - e1) } else { 1.0 };
    let energies: Vec<f64> = e
        .iter()
        .enumerate()
        .map(|(k, &v)| if k <= 1 { v } else { e1 + (v - e1) * factor })
        .collect();
    MolecularSystem::new(energies, std::array::from_fn(|a| system.dipole(a).to_vec()))
}

/// Pulse template with the automatic harmonic count (top frequency above the
/// highest level) and a constant term.
pub fn pulse_template(system: &MolecularSystem, clamp: Option<f64>) -> Result<PulseParameters> {
    PulseParameters::zeros(PULSE_DURATION, auto_harmonics(system, PULSE_DURATION), true)?.with_clamp(clamp)
}

/// GS → first-excited transfer problem with the genetic-algorithm penalty
/// settings: weight 1 plus the 0.005 a.u. amplitude clamp.
pub fn ga_problem(system: MolecularSystem) -> Result<ControlProblem> {
    let pulse = pulse_template(&system, Some(GA_CLAMP))?;
    let grid = PropagationGrid::covering(PULSE_DURATION, CIRCUIT_DT)?;
    ControlProblem::new(system, 1, pulse, grid, GA_PENALTY, PenaltyMode::Both)
}

/// GS → first-excited transfer problem with the reference-optimizer
/// penalty: weight 10, no clamp.
pub fn reference_problem(system: MolecularSystem) -> Result<ControlProblem> {
    let pulse = pulse_template(&system, None)?;
    let grid = PropagationGrid::covering(PULSE_DURATION, CIRCUIT_DT)?;
    ControlProblem::new(system, 1, pulse, grid, REFERENCE_PENALTY, PenaltyMode::Functional)
}

/// Starting pulse for the reference optimizers: the harmonic closest to the
/// initial→target transition, 0.01 a.u. on all three axes.
pub fn guess_pulse(problem: &ControlProblem) -> Result<PulseParameters> {
    let e = problem.system.energies();
    let omega = (e[problem.target_state] - e[problem.initial_state]).abs();
    let t = &problem.pulse_template;
    PulseParameters::resonant_guess(t.duration(), t.n_harmonics(), t.include_dc(), omega, 0.01, &[0, 1, 2])
}

/// Resonant single-harmonic x pulse of modest strength used to compare
/// propagators on the three-level system.
pub fn benchmark_pulse(system: &MolecularSystem) -> Result<PulseParameters> {
    let omega = system.energies()[1] - system.energies()[0];
    PulseParameters::resonant_guess(
        PULSE_DURATION,
        auto_harmonics(system, PULSE_DURATION),
        false,
        omega,
        0.004,
        &[0],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_systems_load() {
        assert_eq!(cyan3_like().n_states(), 3);
        assert_eq!(cyan11_like().n_states(), 11);
        assert_eq!(two_level().n_states(), 2);
        let c3 = cyan3_like();
        let c11 = cyan11_like();
        for axis in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(c3.dipole_element(axis, i, j), c11.dipole_element(axis, i, j));
                }
            }
        }
    }

    #[test]
    fn auto_harmonics_cover_the_spectrum() {
        let s = cyan3_like();
        let m = auto_harmonics(&s, PULSE_DURATION);
        let top = m as f64 * std::f64::consts::PI / PULSE_DURATION;
        assert!(top > 0.18 && (m - 1) as f64 * std::f64::consts::PI / PULSE_DURATION <= 0.18);
        assert_eq!(m, 15);
    }

    #[test]
    fn synthetic_is_deterministic_and_valid() {
        let a = synthetic(6, 3, true).unwrap();
        let b = synthetic(6, 3, true).unwrap();
        assert_eq!(a, b);
        assert!(a.dipole(0).iter().all(|v| *v != 0.0));
        let sparse = synthetic(6, 3, false).unwrap();
        assert!(sparse.dipole(0).contains(&0.0));
    }

    #[test]
    fn scaled_spectrum_keeps_low_levels() {
        let s = synthetic(8, 1, true).unwrap();
        let t = scaled_spectrum(&s, 0.2).unwrap();
        assert_eq!(t.energies()[0], s.energies()[0]);
        assert_eq!(t.energies()[1], s.energies()[1]);
        assert!((t.energies()[7] - 0.2).abs() < 1e-15);
    }
}
