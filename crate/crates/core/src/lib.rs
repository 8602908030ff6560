//! Laser-pulse optimal control of molecular excitations, simulated both
//! classically and through single-excitation qubit circuits.
//!
//! Modules, roughly in dependency order:
//!
//! * [`model`]: molecular system, pulse parameterization, grids, the control functional.
//! * [`reference`]: classical Euler and exact-exponential propagators.
//! * [`circuit`]: gates, statevector and density-matrix simulators, noise, sampling.
//! * [`encoding`]: mapping the molecular Hamiltonian onto Trotterized circuits.
//! * [`optimize`]: genetic algorithm plus simplex and quasi-Newton baselines.

pub mod error;
pub mod export;
pub mod fixtures;
pub mod model;
pub mod reference;
pub mod circuit;
pub mod encoding;
pub mod optimize;

pub use error::{Error, ErrorKind, Result};
