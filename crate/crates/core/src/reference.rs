//! Classical wavefunction propagation in the molecular eigenbasis.
//!
//! Two propagators share the piecewise-constant convention: within each step
//! the Hamiltonian is frozen at the field value of the step's left endpoint.
//!
//! * [`propagate_euler`] is the naive first-order explicit scheme
//!   `c ← c − i·H·c·dt`. It is not norm-preserving and is never renormalized;
//!   the drift is part of what it reports.
//! * [`propagate_exact`] applies `exp(−i·H(t_j)·Δt)` exactly through the
//!   eigendecomposition of the real symmetric `H(t_j)`. It is unitary to
//!   rounding and serves as the oracle for everything else.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::export::{num, CsvTable};
use crate::model::{ControlProblem, MolecularSystem, PropagationGrid, PulseParameters};

/// Amplitudes `c_k(t_j)` on an output grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
}

/// Column layout for trajectory exports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryColumns {
    Populations,
    Amplitudes,
}

impl WavefunctionTrajectory {
    fn with_capacity(n: usize) -> Self {
        Self {
            times: Vec::with_capacity(n),
            states: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, t: f64, state: &[Complex64]) {
        self.times.push(t);
        self.states.push(state.to_vec());
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn n_states(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    /// `|c_k(t_j)|²` for every stored time.
    pub fn populations(&self) -> Vec<Vec<f64>> {
        self.states
            .iter()
            .map(|s| s.iter().map(Complex64::norm_sqr).collect())
            .collect()
    }

    pub fn final_state(&self) -> &[Complex64] {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn final_population(&self, k: usize) -> f64 {
        self.final_state()[k].norm_sqr()
    }

    pub fn norms(&self) -> Vec<f64> {
        self.states
            .iter()
            .map(|s| s.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt())
            .collect()
    }

    /// Largest `| ‖c(t)‖ − 1 |` along the trajectory.
    pub fn max_norm_drift(&self) -> f64 {
        self.norms().into_iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Keeps only the samples that fall on `grid` (which must be a coarsening
    /// of this trajectory's time axis).
    pub fn resample(&self, grid: &PropagationGrid) -> Result<Self> {
        let dt_self = match self.times.as_slice() {
            [a, b, ..] => b - a,
            _ => return Err(Error::Comparison("trajectory too short to resample".into())),
        };
        let ratio = grid.dt() / dt_self;
        let stride = ratio.round();
        if stride < 1.0 || (ratio - stride).abs() > 1e-6 {
            return Err(Error::Comparison(format!(
                "output step {} is not a multiple of {dt_self}",
                grid.dt()
            )));
        }
        let stride = stride as usize;
        let needed = grid.n_steps() * stride;
        if needed >= self.len() {
            return Err(Error::Comparison("trajectory shorter than requested grid".into()));
        }
        let mut out = Self::with_capacity(grid.n_steps() + 1);
        for j in 0..=grid.n_steps() {
            out.push(grid.time(j), &self.states[j * stride]);
        }
        Ok(out)
    }

    pub fn to_csv(&self, columns: TrajectoryColumns) -> CsvTable {
        let q = self.n_states();
        let mut header = vec!["time".to_string()];
        match columns {
            TrajectoryColumns::Populations => header.extend((0..q).map(|k| format!("P{k}"))),
            TrajectoryColumns::Amplitudes => {
                for k in 0..q {
                    header.push(format!("re_c{k}"));
                    header.push(format!("im_c{k}"));
                }
            }
        }
        let mut table = CsvTable::new(header);
        for (t, state) in self.times.iter().zip(&self.states) {
            let mut row = vec![num(*t)];
            match columns {
                TrajectoryColumns::Populations => row.extend(state.iter().map(|c| num(c.norm_sqr()))),
                TrajectoryColumns::Amplitudes => {
                    for c in state {
                        row.push(num(c.re));
                        row.push(num(c.im));
                    }
                }
            }
            table.push(row);
        }
        table
    }
}

fn initial_state(problem: &ControlProblem) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); problem.system.n_states()];
    c[problem.initial_state] = Complex64::new(1.0, 0.0);
    c
}

fn check_pulse(problem: &ControlProblem, pulse: &PulseParameters, grid: &PropagationGrid) -> Result<()> {
    if !grid.matches_duration(pulse.duration()) {
        return Err(Error::invalid(format!(
            "grid covers {} a.u. but pulse lasts {} a.u.",
            grid.duration(),
            pulse.duration()
        )));
    }
    if pulse.n_harmonics() != problem.pulse_template.n_harmonics() {
        return Err(Error::invalid("pulse does not match the problem's harmonic count"));
    }
    Ok(())
}

/// First-order explicit Euler with step `dt_fine`, stored on the problem's grid.
pub fn propagate_euler(
    problem: &ControlProblem,
    pulse: &PulseParameters,
    dt_fine: f64,
) -> Result<WavefunctionTrajectory> {
    let grid = &problem.grid;
    check_pulse(problem, pulse, grid)?;
    let ratio = grid.dt() / dt_fine;
    let stride = ratio.round();
    if !(dt_fine > 0.0) || stride < 1.0 || (ratio - stride).abs() > 1e-9 * ratio {
        return Err(Error::invalid(format!(
            "Euler step {dt_fine} must divide the output step {}",
            grid.dt()
        )));
    }
    let stride = stride as usize;
    let q = problem.system.n_states();
    let mut h = vec![0.0; q * q];
    let mut c = initial_state(problem);
    let mut hc = vec![Complex64::new(0.0, 0.0); q];
    let mut traj = WavefunctionTrajectory::with_capacity(grid.n_steps() + 1);
    traj.push(0.0, &c);
    let total = grid.n_steps() * stride;
    for step in 0..total {
        let t = step as f64 * dt_fine;
        problem.system.fill_hamiltonian(&pulse.field_unchecked(t), &mut h);
        for (i, out) in hc.iter_mut().enumerate() {
            let row = &h[i * q..(i + 1) * q];
            *out = row.iter().zip(&c).map(|(hij, cj)| cj * *hij).sum();
        }
        for (ci, hci) in c.iter_mut().zip(&hc) {
            // c − i·dt·(Hc)
            *ci += Complex64::new(hci.im * dt_fine, -hci.re * dt_fine);
        }
        if c.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::PropagationDiverged { step, time: t });
        }
        if (step + 1) % stride == 0 {
            traj.push(grid.time((step + 1) / stride), &c);
        }
    }
    Ok(traj)
}

/// One exact piecewise-constant step `c ← exp(−i·H·dt)·c`.
pub(crate) struct ExactStepper<'a> {
    system: &'a MolecularSystem,
    h: Vec<f64>,
    scratch: Vec<Complex64>,
}

impl<'a> ExactStepper<'a> {
    pub(crate) fn new(system: &'a MolecularSystem) -> Self {
        let q = system.n_states();
        Self {
            system,
            h: vec![0.0; q * q],
            scratch: vec![Complex64::new(0.0, 0.0); q],
        }
    }

    pub(crate) fn step(&mut self, field: &[f64; 3], dt: f64, c: &mut [Complex64]) -> Result<()> {
        let q = c.len();
        self.system.fill_hamiltonian(field, &mut self.h);
        let eig = SymmetricEigen::try_new(DMatrix::from_row_slice(q, q, &self.h), 1e-15, 10_000)
            .ok_or_else(|| Error::Numerical("symmetric eigendecomposition did not converge".into()))?;
        let v = &eig.eigenvectors;
        // scratch = e^{−iλdt} ⊙ (Vᵀ c)
        for (k, s) in self.scratch.iter_mut().enumerate() {
            let proj: Complex64 = (0..q).map(|i| c[i] * v[(i, k)]).sum();
            *s = proj * Complex64::from_polar(1.0, -eig.eigenvalues[k] * dt);
        }
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = (0..q).map(|k| self.scratch[k] * v[(i, k)]).sum();
        }
        Ok(())
    }
}

/// Exact exponential of the piecewise-constant Hamiltonian on `grid`.
pub fn propagate_exact(
    problem: &ControlProblem,
    pulse: &PulseParameters,
    grid: &PropagationGrid,
) -> Result<WavefunctionTrajectory> {
    let mut traj = WavefunctionTrajectory::with_capacity(grid.n_steps() + 1);
    let last = propagate_exact_visit(problem, pulse, grid, |t, c| traj.push(t, c))?;
    debug_assert_eq!(traj.final_state(), last.as_slice());
    Ok(traj)
}

/// Runs the exact propagator, calling `visit` after every step (and once for
/// the initial state), and returns the final amplitudes.
pub fn propagate_exact_visit(
    problem: &ControlProblem,
    pulse: &PulseParameters,
    grid: &PropagationGrid,
    mut visit: impl FnMut(f64, &[Complex64]),
) -> Result<Vec<Complex64>> {
    check_pulse(problem, pulse, grid)?;
    let mut c = initial_state(problem);
    let mut stepper = ExactStepper::new(&problem.system);
    visit(0.0, &c);
    for j in 0..grid.n_steps() {
        stepper.step(&pulse.field_unchecked(grid.time(j)), grid.dt(), &mut c)?;
        visit(grid.time(j + 1), &c);
    }
    Ok(c)
}

/// Per-time `max_k |P_a,k − P_b,k|`.
pub fn deviation_trace(a: &WavefunctionTrajectory, b: &WavefunctionTrajectory) -> Result<Vec<f64>> {
    if a.len() != b.len() || a.n_states() != b.n_states() {
        return Err(Error::Comparison(format!(
            "shape mismatch: {}x{} vs {}x{}",
            a.len(),
            a.n_states(),
            b.len(),
            b.n_states()
        )));
    }
    if let Some((ta, tb)) = a.times.iter().zip(&b.times).find(|(x, y)| (*x - *y).abs() > 1e-9 * (1.0 + x.abs())) {
        return Err(Error::Comparison(format!("time grids differ ({ta} vs {tb})")));
    }
    Ok(a.states
        .iter()
        .zip(&b.states)
        .map(|(sa, sb)| {
            sa.iter()
                .zip(sb)
                .map(|(x, y)| (x.norm_sqr() - y.norm_sqr()).abs())
                .fold(0.0, f64::max)
        })
        .collect())
}

/// `Δε`: the largest absolute population difference over all states and times.
pub fn max_abs_deviation(a: &WavefunctionTrajectory, b: &WavefunctionTrajectory) -> Result<f64> {
    Ok(deviation_trace(a, b)?.into_iter().fold(0.0, f64::max))
}
