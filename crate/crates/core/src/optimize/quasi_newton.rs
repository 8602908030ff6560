//! BFGS with central finite-difference gradients and a backtracking
//! (Armijo) line search.

use super::{evaluate, Backend, Evaluation, IterationRecord, OptimizationRun};
use crate::error::{Error, Result};
use crate::model::{ControlProblem, PulseParameters};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiNewtonOptions {
    pub max_iter: usize,
    /// Finite-difference step (a.u. of field).
    pub h: f64,
    /// Stop once the largest gradient component falls below this.
    pub gtol: f64,
    /// Length (Euclidean) of the first trial step, before any curvature is known.
    pub initial_step: f64,
}

impl Default for QuasiNewtonOptions {
    fn default() -> Self {
        Self {
            max_iter: 100,
            h: 1e-5,
            gtol: 1e-8,
            initial_step: 1e-3,
        }
    }
}

const ARMIJO_C1: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
const MAX_BACKTRACKS: usize = 40;

/// `∂f/∂x_i ≈ (f(x + h e_i) − f(x − h e_i)) / 2h`
pub fn central_gradient(mut f: impl FnMut(&[f64]) -> Result<f64>, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let mut xp = x.to_vec();
    let mut g = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        xp[i] = x[i] + h;
        let up = f(&xp)?;
        xp[i] = x[i] - h;
        let down = f(&xp)?;
        xp[i] = x[i];
        g.push((up - down) / (2.0 * h));
    }
    Ok(g)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiNewtonResult<T> {
    pub x: Vec<f64>,
    pub f: f64,
    pub data: T,
    pub iterations: usize,
    pub evaluations: usize,
}

/// Minimizes `f` (value plus payload) from `x0`. `on_iter` sees the
/// iterate after every accepted step, with iteration 0 for `x0`.
pub fn bfgs<T: Clone>(
    mut f: impl FnMut(&[f64]) -> Result<(f64, T)>,
    x0: &[f64],
    options: &QuasiNewtonOptions,
    mut on_iter: impl FnMut(usize, &[f64], f64, &T, usize) -> Result<()>,
) -> Result<QuasiNewtonResult<T>> {
    let n = x0.len();
    if !(options.h > 0.0) {
        return Err(Error::invalid("finite-difference step must be positive"));
    }
    let mut evaluations = 0usize;
    let mut value = |x: &[f64], evaluations: &mut usize| -> Result<(f64, T)> {
        *evaluations += 1;
        f(x)
    };
    let mut x = x0.to_vec();
    let (mut fx, mut data) = value(&x, &mut evaluations)?;
    let mut g = central_gradient(|y| value(y, &mut evaluations).map(|r| r.0), &x, options.h)?;
    on_iter(0, &x, fx, &data, evaluations)?;
    // inverse Hessian approximation, row-major
    let mut hinv: Vec<f64> = (0..n * n).map(|k| if k % (n + 1) == 0 { 1.0 } else { 0.0 }).collect();
    let mut first = true;
    let mut iterations = 0;
    while iterations < options.max_iter {
        if g.iter().all(|v| v.abs() < options.gtol) {
            break;
        }
        let mut p: Vec<f64> = (0..n).map(|i| -dot(&hinv[i * n..(i + 1) * n], &g)).collect();
        let mut slope = dot(&g, &p);
        if slope >= 0.0 {
            // lost descent direction: restart from steepest descent
            hinv.iter_mut().enumerate().for_each(|(k, v)| *v = if k % (n + 1) == 0 { 1.0 } else { 0.0 });
            first = true;
            p = g.iter().map(|v| -v).collect();
            slope = dot(&g, &p);
        }
        if first {
            let norm = dot(&p, &p).sqrt();
            if norm > options.initial_step {
                let s = options.initial_step / norm;
                p.iter_mut().for_each(|v| *v *= s);
                slope *= s;
            }
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + t * b).collect();
            let (ft, dt) = value(&trial, &mut evaluations)?;
            if ft <= fx + ARMIJO_C1 * t * slope {
                accepted = Some((trial, ft, dt));
                break;
            }
            t *= BACKTRACK;
        }
        let Some((x_new, f_new, d_new)) = accepted else {
            break;
        };
        let g_new = central_gradient(|y| value(y, &mut evaluations).map(|r| r.0), &x_new, options.h)?;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
            if first {
                let scale = sy / dot(&y, &y);
                hinv.iter_mut().for_each(|v| *v *= scale);
                first = false;
            }
            // H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..n).map(|i| dot(&hinv[i * n..(i + 1) * n], &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..n {
                for j in 0..n {
                    hinv[i * n + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }
        x = x_new;
        fx = f_new;
        data = d_new;
        g = g_new;
        iterations += 1;
        on_iter(iterations, &x, fx, &data, evaluations)?;
    }
    Ok(QuasiNewtonResult {
        x,
        f: fx,
        data,
        iterations,
        evaluations,
    })
}

/// Maximizes the problem functional from `guess` with BFGS.
pub fn quasi_newton_run(
    problem: &ControlProblem,
    backend: &Backend,
    guess: &PulseParameters,
    options: &QuasiNewtonOptions,
) -> Result<OptimizationRun> {
    problem.validate()?;
    let template = &problem.pulse_template;
    let x0 = template.with_flat_amplitudes(&guess.flat_amplitudes())?.active_vector();
    let clamp = problem.clamp();
    let to_pulse = |x: &[f64]| -> Result<PulseParameters> {
        let mut p = template.with_active_vector(x)?;
        if let Some(c) = clamp {
            p.clamp_in_place(c);
        }
        Ok(p)
    };
    let mut counter = 0u64;
    let objective = |x: &[f64]| -> Result<(f64, Evaluation)> {
        let e = evaluate(problem, &to_pulse(x)?, backend, counter)?;
        counter += 1;
        Ok((-e.objective, e))
    };
    let mut history = Vec::new();
    let result = bfgs(objective, &x0, options, |it, x, _, e, evals| {
        history.push(IterationRecord::new(it, e, &to_pulse(x)?, e.objective, evals, None));
        Ok(())
    })?;
    let mut warnings = Vec::new();
    if !backend.is_deterministic() {
        warnings.push("sampled readout: finite-difference gradients are dominated by shot noise".into());
    }
    if clamp.is_some() {
        warnings.push("amplitude clamp makes the objective non-smooth at the bound".into());
    }
    Ok(OptimizationRun {
        optimizer: "quasi-newton".into(),
        backend: backend.to_string(),
        seed: 0,
        evaluations: result.evaluations,
        history,
        best_pulse: to_pulse(&result.x)?,
        best: result.data,
        warnings,
        early_stop_generation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_of_linear_function_is_exact() {
        let slope = [0.5, -2.0, 3.25];
        let g = central_gradient(|x| Ok(dot(&slope, x) + 1.0), &[0.1, 0.2, 0.3], 1e-5).unwrap();
        for (a, b) in g.iter().zip(&slope) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn minimizes_a_rosenbrock_valley() {
        let f = |x: &[f64]| Ok(((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2), ()));
        let opts = QuasiNewtonOptions {
            max_iter: 500,
            h: 1e-6,
            gtol: 1e-7,
            initial_step: 0.1,
        };
        let r = bfgs(f, &[-1.2, 1.0], &opts, |_, _, _, _, _| Ok(())).unwrap();
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4, "{:?}", r.x);
    }
}
