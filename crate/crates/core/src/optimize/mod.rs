//! Pulse optimization: objective evaluation on any backend, a scheduled
//! genetic algorithm, and Nelder-Mead and BFGS baselines.

mod backend;
pub mod ga;
pub mod nelder_mead;
pub mod quasi_newton;
mod run;

pub use backend::{evaluate, Backend, Evaluation, Readout};
pub use ga::{ga_run, mutate, recombine, select, GaConfig, GaPhase, Genome, MutationMode, PhaseMode, stream_seed};
pub use nelder_mead::{initial_simplex, nelder_mead, nelder_mead_run, Minimum, NelderMeadOptions, Vertex};
pub use quasi_newton::{bfgs, central_gradient, quasi_newton_run, QuasiNewtonOptions, QuasiNewtonResult};
pub use run::{IterationRecord, OptimizationRun};
