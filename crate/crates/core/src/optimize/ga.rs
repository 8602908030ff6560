//! Real-valued genetic algorithm with an exploration/convergence schedule.
//!
//! A generation evaluates `population_size` fresh individuals. Apart from the
//! random first generation these are children: two distinct parents drawn
//! from the `m` best, uniform crossover, then Gaussian mutation and clamping.
//! The incumbent best rides along unchanged with its cached fitness, so the
//! best objective never decreases on a deterministic backend.

use std::cmp::Ordering;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{evaluate, Backend, Evaluation, IterationRecord, OptimizationRun};
use crate::error::{Error, Result};
use crate::model::{ControlProblem, PulseParameters};

/// One individual: the free pulse amplitudes (see
/// [`PulseParameters::active_vector`]) and, once evaluated, its score.
#[derive(Debug, Clone, PartialEq)]
pub struct Genome {
    pub values: Vec<f64>,
    pub evaluation: Option<Evaluation>,
}

impl Genome {
    pub fn new(values: Vec<f64>) -> Self {
        Self {
            values,
            evaluation: None,
        }
    }

    pub fn evaluated(values: Vec<f64>, evaluation: Evaluation) -> Self {
        Self {
            values,
            evaluation: Some(evaluation),
        }
    }

    pub fn fitness(&self) -> Option<f64> {
        self.evaluation.map(|e| e.objective)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseMode {
    Exploration,
    Convergence,
}

impl PhaseMode {
    pub fn name(self) -> &'static str {
        match self {
            PhaseMode::Exploration => "exploration",
            PhaseMode::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaPhase {
    pub mode: PhaseMode,
    pub generations: usize,
    pub population_size: usize,
    pub mutation_sigma: f64,
}

/// Mutation width of exploration phases (a.u.).
pub const EXPLORATION_SIGMA: f64 = 1e-3;
/// Mutation width of convergence phases (a.u.).
pub const CONVERGENCE_SIGMA: f64 = 1e-4;

impl GaPhase {
    pub fn exploration(generations: usize, population_size: usize) -> Self {
        Self {
            mode: PhaseMode::Exploration,
            generations,
            population_size,
            mutation_sigma: EXPLORATION_SIGMA,
        }
    }

    pub fn convergence(generations: usize, population_size: usize) -> Self {
        Self {
            mode: PhaseMode::Convergence,
            generations,
            population_size,
            mutation_sigma: CONVERGENCE_SIGMA,
        }
    }
}

/// Which children are mutated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutationMode {
    /// Every rebuilt child.
    #[default]
    All,
    /// A random subset of this many children per generation.
    Count(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GaConfig {
    pub phases: Vec<GaPhase>,
    pub selected_count: usize,
    pub recombination_probability: f64,
    pub mutation: MutationMode,
    pub mutation_probability: f64,
    pub mutation_mean: f64,
    pub amplitude_clamp: f64,
    /// Once the best target population reaches this value the schedule
    /// jumps to its last phase.
    pub early_stop_population: Option<f64>,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self::three_states(0)
    }
}

impl GaConfig {
    fn with_phases(phases: Vec<GaPhase>, seed: u64) -> Self {
        Self {
            phases,
            selected_count: 10,
            recombination_probability: 1.0,
            mutation: MutationMode::All,
            mutation_probability: 0.2,
            mutation_mean: 0.0,
            amplitude_clamp: 0.005,
            early_stop_population: Some(0.95),
            seed,
        }
    }

    /// 15 exploration plus 15 convergence generations of 40 individuals.
    pub fn three_states(seed: u64) -> Self {
        Self::with_phases(vec![GaPhase::exploration(15, 40), GaPhase::convergence(15, 40)], seed)
    }

    /// 50 exploration plus 50 convergence generations of 70 individuals.
    pub fn eleven_states(seed: u64) -> Self {
        Self::with_phases(vec![GaPhase::exploration(50, 70), GaPhase::convergence(50, 70)], seed)
    }

    /// Six 10-generation phases alternating exploration (80 individuals) and
    /// convergence (50), closed by a 40-generation convergence phase.
    pub fn alternating(seed: u64) -> Self {
        let mut phases = Vec::new();
        for i in 0..6 {
            phases.push(if i % 2 == 0 {
                GaPhase::exploration(10, 80)
            } else {
                GaPhase::convergence(10, 50)
            });
        }
        phases.push(GaPhase::convergence(40, 50));
        Self::with_phases(phases, seed)
    }

    pub fn preset(name: &str, seed: u64) -> Option<Self> {
        match name {
            "three-states" => Some(Self::three_states(seed)),
            "eleven-states" => Some(Self::eleven_states(seed)),
            "alternating" => Some(Self::alternating(seed)),
            _ => None,
        }
    }

    pub fn total_generations(&self) -> usize {
        self.phases.iter().map(|p| p.generations).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.phases.is_empty() {
            return Err(Error::invalid("GA needs at least one phase"));
        }
        if self.selected_count == 0 {
            return Err(Error::invalid("selected_count must be >= 1"));
        }
        for (i, p) in self.phases.iter().enumerate() {
            if p.generations == 0 {
                return Err(Error::invalid(format!("phase {i} has no generations")));
            }
            if p.population_size < self.selected_count {
                return Err(Error::invalid(format!(
                    "phase {i}: population {} smaller than selected_count {}",
                    p.population_size, self.selected_count
                )));
            }
            if !(p.mutation_sigma.is_finite() && p.mutation_sigma >= 0.0) {
                return Err(Error::invalid(format!("phase {i}: mutation sigma must be >= 0")));
            }
        }
        for (name, p) in [
            ("recombination_probability", self.recombination_probability),
            ("mutation_probability", self.mutation_probability),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!("{name} must lie in [0, 1]")));
            }
        }
        if !self.mutation_mean.is_finite() {
            return Err(Error::invalid("mutation_mean must be finite"));
        }
        if !(self.amplitude_clamp.is_finite() && self.amplitude_clamp > 0.0) {
            return Err(Error::invalid("amplitude_clamp must be > 0"));
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the random stream owned by individual `index` of `generation`.
/// Streams are independent of evaluation order, so parallel runs reproduce
/// sequential ones bit for bit.
pub fn stream_seed(seed: u64, generation: usize, index: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ generation as u64) ^ index as u64)
}

fn rank(a: (usize, &Evaluation), b: (usize, &Evaluation)) -> Ordering {
    b.1.objective
        .total_cmp(&a.1.objective)
        .then(a.1.fluence.total_cmp(&b.1.fluence))
        .then(a.0.cmp(&b.0))
}

/// Indices of the `m` best genomes, best first. Higher `J` wins; ties go to
/// the lower fluence, then to the lower index.
pub fn select(population: &[Genome], m: usize) -> Result<Vec<usize>> {
    let mut scored = Vec::with_capacity(population.len());
    for (i, g) in population.iter().enumerate() {
        let e = g
            .evaluation
            .as_ref()
            .ok_or_else(|| Error::State(format!("genome {i} has not been evaluated")))?;
        scored.push((i, e));
    }
    scored.sort_by(|a, b| rank(*a, *b));
    Ok(scored.into_iter().take(m).map(|(i, _)| i).collect())
}

/// Uniform crossover: each gene comes from either parent with probability ½.
pub fn recombine<R: Rng + ?Sized>(a: &[f64], b: &[f64], rng: &mut R) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| if rng.random_bool(0.5) { *x } else { *y })
        .collect()
}

/// Adds `Normal(mean, sigma)` to each gene with probability `probability`,
/// then clamps every gene to `±clamp`.
pub fn mutate<R: Rng + ?Sized>(values: &mut [f64], probability: f64, mean: f64, sigma: f64, clamp: f64, rng: &mut R) {
    let normal = Normal::new(mean, sigma).expect("validated mutation parameters");
    for v in values.iter_mut() {
        if rng.random_bool(probability) {
            *v += normal.sample(rng);
        }
        *v = v.clamp(-clamp, clamp);
    }
}

#[cfg(feature = "parallel")]
fn evaluate_batch(
    problem: &ControlProblem,
    backend: &Backend,
    pulses: &[PulseParameters],
    seeds: &[u64],
) -> Vec<Result<Evaluation>> {
    use rayon::prelude::*;
    pulses
        .par_iter()
        .zip(seeds.par_iter())
        .map(|(p, s)| evaluate(problem, p, backend, *s))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate_batch(
    problem: &ControlProblem,
    backend: &Backend,
    pulses: &[PulseParameters],
    seeds: &[u64],
) -> Vec<Result<Evaluation>> {
    pulses
        .iter()
        .zip(seeds)
        .map(|(p, s)| evaluate(problem, p, backend, *s))
        .collect()
}

fn evaluate_genomes(
    problem: &ControlProblem,
    backend: &Backend,
    genomes: &mut [Genome],
    seed: u64,
    generation: usize,
) -> Result<()> {
    let template = &problem.pulse_template;
    let pulses = genomes
        .iter()
        .map(|g| template.with_active_vector(&g.values))
        .collect::<Result<Vec<_>>>()?;
    let seeds: Vec<u64> = (0..genomes.len())
        .map(|i| splitmix64(stream_seed(seed, generation, i)))
        .collect();
    for (i, (g, r)) in genomes
        .iter_mut()
        .zip(evaluate_batch(problem, backend, &pulses, &seeds))
        .enumerate()
    {
        let e = r.map_err(|source| Error::Generation {
            generation,
            source: Box::new(Error::Evaluation {
                genome: i,
                source: Box::new(source),
            }),
        })?;
        g.evaluation = Some(e);
    }
    Ok(())
}

fn record(
    problem: &ControlProblem,
    population: &[Genome],
    best: &Genome,
    generation: usize,
    evaluations: usize,
    phase: PhaseMode,
) -> Result<IterationRecord> {
    let mean_j = population.iter().filter_map(Genome::fitness).sum::<f64>() / population.len() as f64;
    let pulse = problem.pulse_template.with_active_vector(&best.values)?;
    Ok(IterationRecord::new(
        generation,
        best.evaluation.as_ref().expect("best is evaluated"),
        &pulse,
        mean_j,
        evaluations,
        Some(phase.name().to_string()),
    ))
}

/// Runs the scheduled GA and returns its full history.
pub fn ga_run(problem: &ControlProblem, config: &GaConfig, backend: &Backend) -> Result<OptimizationRun> {
    config.validate()?;
    problem.validate()?;
    let n = problem.pulse_template.active_len();
    let clamp = config.amplitude_clamp;
    let m = config.selected_count;
    let last_phase = config.phases.len() - 1;

    // Generation 0: uniform random amplitudes inside the clamp.
    let first = config.phases[0];
    let mut population: Vec<Genome> = (0..first.population_size)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(config.seed, 0, i));
            Genome::new((0..n).map(|_| rng.random_range(-clamp..=clamp)).collect())
        })
        .collect();
    evaluate_genomes(problem, backend, &mut population, config.seed, 0)?;
    let mut evaluations = population.len();
    let mut best = population[select(&population, 1)?[0]].clone();
    let mut history = vec![record(problem, &population, &best, 0, evaluations, first.mode)?];
    let mut warnings = Vec::new();
    let mut early_stop = None;

    let (mut phase_idx, mut in_phase, mut generation) = (0usize, 1usize, 0usize);
    loop {
        let reached = config
            .early_stop_population
            .is_some_and(|t| best.evaluation.is_some_and(|e| e.target_population >= t));
        if reached && phase_idx < last_phase {
            early_stop = Some(generation);
            phase_idx = last_phase;
            in_phase = 0;
        }
        if in_phase >= config.phases[phase_idx].generations {
            if phase_idx == last_phase {
                break;
            }
            phase_idx += 1;
            in_phase = 0;
        }
        let phase = config.phases[phase_idx];
        generation += 1;
        in_phase += 1;

        let parents = select(&population, m)?;
        let mut children: Vec<Genome> = (0..phase.population_size)
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(config.seed, generation, i));
                let a = parents[rng.random_range(0..parents.len())];
                let b = if parents.len() > 1 {
                    // a second, distinct parent
                    let k = rng.random_range(0..parents.len() - 1);
                    let pa = parents.iter().position(|&x| x == a).expect("parent in list");
                    parents[if k >= pa { k + 1 } else { k }]
                } else {
                    a
                };
                let values = if rng.random_bool(config.recombination_probability) {
                    recombine(&population[a].values, &population[b].values, &mut rng)
                } else {
                    population[a].values.clone()
                };
                Genome::new(values)
            })
            .collect();
        let mutated: Vec<usize> = match config.mutation {
            MutationMode::All => (0..children.len()).collect(),
            MutationMode::Count(k) => {
                let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(config.seed, generation, usize::MAX));
                let mut idx = sample(&mut rng, children.len(), k.min(children.len())).into_vec();
                idx.sort_unstable();
                idx
            }
        };
        for i in mutated {
            // continue the child's own stream past its breeding draws
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(stream_seed(config.seed, generation, i) ^ 0x6d75_7461));
            mutate(
                &mut children[i].values,
                config.mutation_probability,
                config.mutation_mean,
                phase.mutation_sigma,
                clamp,
                &mut rng,
            );
        }
        evaluate_genomes(problem, backend, &mut children, config.seed, generation)?;
        evaluations += children.len();

        population = Vec::with_capacity(children.len() + 1);
        population.push(best.clone());
        population.extend(children);
        best = population[select(&population, 1)?[0]].clone();
        history.push(record(problem, &population, &best, generation, evaluations, phase.mode)?);
    }

    if !backend.is_deterministic() {
        warnings.push("sampled readout: best fitness values carry shot noise".into());
    }
    let best_pulse = problem.pulse_template.with_active_vector(&best.values)?;
    Ok(OptimizationRun {
        optimizer: "ga".into(),
        backend: backend.to_string(),
        seed: config.seed,
        evaluations,
        history,
        best_pulse,
        best: best.evaluation.expect("best is evaluated"),
        warnings,
        early_stop_generation: early_stop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(objective: f64, fluence: f64) -> Evaluation {
        Evaluation {
            objective,
            target_population: objective + fluence,
            fluence,
            bare_fluence: fluence,
        }
    }

    #[test]
    fn select_orders_and_breaks_ties() {
        let pop = vec![
            Genome::evaluated(vec![0.0], eval(0.5, 0.1)),
            Genome::evaluated(vec![1.0], eval(0.9, 0.2)),
            Genome::evaluated(vec![2.0], eval(0.9, 0.1)),
            Genome::evaluated(vec![3.0], eval(0.9, 0.1)),
        ];
        assert_eq!(select(&pop, 4).unwrap(), vec![2, 3, 1, 0]);
        assert_eq!(select(&pop, 2).unwrap(), vec![2, 3]);
        let mut bad = pop.clone();
        bad[1].evaluation = None;
        assert!(matches!(select(&bad, 2), Err(Error::State(_))));
    }

    #[test]
    fn recombination_of_equal_parents() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = vec![0.1, -0.2, 0.3];
        assert_eq!(recombine(&a, &a, &mut rng), a);
        let b = vec![1.0, 2.0, 3.0];
        let c1 = recombine(&a, &b, &mut rng);
        assert!(c1.iter().enumerate().all(|(i, v)| *v == a[i] || *v == b[i]));
    }

    #[test]
    fn mutation_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let orig = vec![0.001, -0.002, 0.004];
        let mut v = orig.clone();
        mutate(&mut v, 0.0, 0.0, 1.0, 0.005, &mut rng);
        assert_eq!(v, orig);
        mutate(&mut v, 1.0, 0.0, 0.0, 0.005, &mut rng);
        assert_eq!(v, orig);
    }

    #[test]
    fn presets_validate() {
        for name in ["three-states", "eleven-states", "alternating"] {
            let c = GaConfig::preset(name, 1).unwrap();
            c.validate().unwrap();
            assert_eq!(c.total_generations(), if name == "three-states" { 30 } else { 100 });
        }
        let mut c = GaConfig::three_states(0);
        c.selected_count = 41;
        assert!(c.validate().is_err());
        let json = serde_json::to_string(&GaConfig::alternating(3)).unwrap();
        let back: GaConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, GaConfig::alternating(3));
        let partial: GaConfig = serde_json::from_str(r#"{"mutation": {"count": 10}, "seed": 4}"#).unwrap();
        assert_eq!(partial.mutation, MutationMode::Count(10));
        assert_eq!(partial.phases, GaConfig::three_states(0).phases);
    }

    #[test]
    fn stream_seeds_differ() {
        let a = stream_seed(1, 0, 0);
        assert_ne!(a, stream_seed(1, 0, 1));
        assert_ne!(a, stream_seed(1, 1, 0));
        assert_ne!(a, stream_seed(2, 0, 0));
        assert_eq!(a, stream_seed(1, 0, 0));
    }
}
