//! Downhill simplex with the standard coefficients: reflection 1,
//! expansion 2, contraction ½, shrink ½.

use super::{evaluate, Backend, Evaluation, IterationRecord, OptimizationRun};
use crate::error::{Error, Result};
use crate::model::{ControlProblem, PulseParameters};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Value used for a zero coordinate when building the initial simplex.
pub const ZERO_COORDINATE_STEP: f64 = 0.00025;
/// Relative increase of a nonzero coordinate when building the initial simplex.
pub const RELATIVE_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iter: usize,
    /// Stop once every vertex lies within this distance (max norm) of the best…
    pub xatol: f64,
    /// …and every vertex value within this of the best value.
    pub fatol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iter: 1000,
            xatol: 1e-10,
            fatol: 1e-12,
        }
    }
}

/// A point, its objective value, and whatever else the objective reported.
#[derive(Debug, Clone, PartialEq)]
pub struct Vertex<T> {
    pub x: Vec<f64>,
    pub f: f64,
    pub data: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum<T> {
    pub best: Vertex<T>,
    pub iterations: usize,
    pub evaluations: usize,
    /// Whether the flat-simplex criterion fired (as opposed to `max_iter`).
    pub converged: bool,
}

/// `x0` plus one vertex per coordinate: a zero coordinate becomes
/// [`ZERO_COORDINATE_STEP`], any other grows by [`RELATIVE_STEP`].
pub fn initial_simplex(x0: &[f64]) -> Vec<Vec<f64>> {
    let mut simplex = vec![x0.to_vec()];
    for i in 0..x0.len() {
        let mut v = x0.to_vec();
        v[i] = if v[i] == 0.0 {
            ZERO_COORDINATE_STEP
        } else {
            v[i] * (1.0 + RELATIVE_STEP)
        };
        simplex.push(v);
    }
    simplex
}

fn combine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t·(b − a)
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Minimizes `f` from the given simplex. `f` returns the value plus a
/// payload kept alongside each vertex. `on_iter` sees the ordered simplex
/// after every iteration (iteration 0 is the initial simplex).
pub fn nelder_mead<T: Clone>(
    mut f: impl FnMut(&[f64]) -> Result<(f64, T)>,
    simplex: Vec<Vec<f64>>,
    options: &NelderMeadOptions,
    mut on_iter: impl FnMut(usize, &[Vertex<T>], usize) -> Result<()>,
) -> Result<Minimum<T>> {
    let n = simplex.first().map_or(0, Vec::len);
    if simplex.len() != n + 1 || simplex.iter().any(|v| v.len() != n) {
        return Err(Error::invalid("a simplex in n dimensions needs n+1 vertices of length n"));
    }
    let mut evaluations = 0usize;
    let mut eval = |x: Vec<f64>, evaluations: &mut usize| -> Result<Vertex<T>> {
        *evaluations += 1;
        let (fx, data) = f(&x)?;
        Ok(Vertex { x, f: fx, data })
    };
    let mut verts = simplex
        .into_iter()
        .map(|x| eval(x, &mut evaluations))
        .collect::<Result<Vec<_>>>()?;
    let order = |verts: &mut Vec<Vertex<T>>| verts.sort_by(|a, b| a.f.total_cmp(&b.f));
    order(&mut verts);
    on_iter(0, &verts, evaluations)?;

    let mut iterations = 0;
    let mut converged = false;
    while iterations < options.max_iter {
        let best = &verts[0];
        let x_spread = verts
            .iter()
            .flat_map(|v| v.x.iter().zip(&best.x).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        let f_spread = verts.iter().map(|v| (v.f - best.f).abs()).fold(0.0, f64::max);
        if x_spread <= options.xatol && f_spread <= options.fatol {
            converged = true;
            break;
        }
        iterations += 1;

        let worst = verts[n].clone();
        let mut centroid = vec![0.0; n];
        for v in &verts[..n] {
            for (c, x) in centroid.iter_mut().zip(&v.x) {
                *c += x / n as f64;
            }
        }
        let reflected = eval(combine(&centroid, &worst.x, -REFLECT), &mut evaluations)?;
        let replacement = if reflected.f < verts[0].f {
            let expanded = eval(combine(&centroid, &reflected.x, EXPAND), &mut evaluations)?;
            Some(if expanded.f < reflected.f { expanded } else { reflected })
        } else if reflected.f < verts[n - 1].f {
            Some(reflected)
        } else if reflected.f < worst.f {
            let outside = eval(combine(&centroid, &reflected.x, CONTRACT), &mut evaluations)?;
            (outside.f <= reflected.f).then_some(outside)
        } else {
            let inside = eval(combine(&centroid, &worst.x, CONTRACT), &mut evaluations)?;
            (inside.f < worst.f).then_some(inside)
        };
        match replacement {
            Some(v) => verts[n] = v,
            None => {
                let anchor = verts[0].x.clone();
                for v in verts.iter_mut().skip(1) {
                    *v = eval(combine(&anchor, &v.x, SHRINK), &mut evaluations)?;
                }
            }
        }
        order(&mut verts);
        on_iter(iterations, &verts, evaluations)?;
    }
    Ok(Minimum {
        best: verts.swap_remove(0),
        iterations,
        evaluations,
        converged,
    })
}

/// Maximizes the problem functional with a simplex built around `guess`.
pub fn nelder_mead_run(
    problem: &ControlProblem,
    backend: &Backend,
    guess: &PulseParameters,
    max_iter: usize,
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
    let options = NelderMeadOptions {
        max_iter,
        ..NelderMeadOptions::default()
    };
    let result = nelder_mead(objective, initial_simplex(&x0), &options, |it, verts, evals| {
        let mean_j = -verts.iter().map(|v| v.f).sum::<f64>() / verts.len() as f64;
        history.push(IterationRecord::new(it, &verts[0].data, &to_pulse(&verts[0].x)?, mean_j, evals, None));
        Ok(())
    })?;
    let mut warnings = Vec::new();
    if !backend.is_deterministic() {
        warnings.push("sampled readout: simplex comparisons carry shot noise".into());
    }
    Ok(OptimizationRun {
        optimizer: "nelder-mead".into(),
        backend: backend.to_string(),
        seed: 0,
        evaluations: result.evaluations,
        history,
        best_pulse: to_pulse(&result.best.x)?,
        best: result.best.data,
        warnings,
        early_stop_generation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_simplex_rule() {
        let s = initial_simplex(&[0.0, 0.01, -0.02]);
        assert_eq!(s.len(), 4);
        assert_eq!(s[1], vec![0.00025, 0.01, -0.02]);
        assert!((s[2][1] - 0.0105).abs() < 1e-18);
        assert!((s[3][2] + 0.021).abs() < 1e-18);
    }

    #[test]
    fn degenerate_simplex_stops_immediately() {
        let x = vec![1.0, 2.0];
        let r = nelder_mead(
            |x| Ok((x[0] * x[0] + x[1] * x[1], ())),
            vec![x.clone(), x.clone(), x.clone()],
            &NelderMeadOptions::default(),
            |_, _, _| Ok(()),
        )
        .unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 0);
        assert_eq!(r.evaluations, 3);
    }

    #[test]
    fn rejects_malformed_simplex() {
        let r = nelder_mead(|_| Ok((0.0, ())), vec![vec![0.0]], &NelderMeadOptions::default(), |_, _, _| Ok(()));
        assert!(r.is_err());
    }
}
