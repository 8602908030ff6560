use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cartesian axis labels, in storage order.
pub const AXES: [char; 3] = ['x', 'y', 'z'];

/// An N-level molecular system: state energies plus the three cartesian
/// dipole matrices coupling it to an external electric field.
///
/// All quantities are in atomic units (hartree for energies, e·a0 for
/// dipoles). Matrices are stored dense and row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularSystem {
    energies: Vec<f64>,
    dipole: [Vec<f64>; 3],
    labels: Option<Vec<String>>,
}

impl MolecularSystem {
    /// Builds a system from energies and row-major `Q×Q` dipole components.
    pub fn new(energies: Vec<f64>, dipole: [Vec<f64>; 3]) -> Result<Self> {
        let q = energies.len();
        if q < 2 {
            return Err(Error::invalid(format!("need at least 2 states, got {q}")));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("energies must be finite"));
        }
        if energies.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::invalid("energies must be sorted ascending"));
        }
        for (axis, mu) in AXES.iter().zip(&dipole) {
            if mu.len() != q * q {
                return Err(Error::invalid(format!(
                    "dipole_{axis} has {} entries, expected {}",
                    mu.len(),
                    q * q
                )));
            }
            if mu.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("dipole_{axis} has non-finite entries")));
            }
            for i in 0..q {
                for j in (i + 1)..q {
                    let (a, b) = (mu[i * q + j], mu[j * q + i]);
                    if a != b {
                        return Err(Error::invalid(format!(
                            "dipole_{axis} not symmetric at ({i},{j}): {a} vs {b}"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            energies,
            dipole,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n_states() {
            return Err(Error::invalid("label count must equal n_states"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n_states(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Row-major dipole component along `axis` (0 = x, 1 = y, 2 = z).
    pub fn dipole(&self, axis: usize) -> &[f64] {
        &self.dipole[axis]
    }

    pub fn dipole_element(&self, axis: usize, i: usize, j: usize) -> f64 {
        self.dipole[axis][i * self.n_states() + j]
    }

    /// `Σ_α field[α]·μ_α[i][j]`
    pub fn projected_dipole(&self, field: &[f64; 3], i: usize, j: usize) -> f64 {
        let idx = i * self.n_states() + j;
        field[0] * self.dipole[0][idx] + field[1] * self.dipole[1][idx] + field[2] * self.dipole[2][idx]
    }

    /// Writes `H = diag(e) − E·μ` into a row-major buffer of length `Q²`.
    pub fn fill_hamiltonian(&self, field: &[f64; 3], out: &mut [f64]) {
        let q = self.n_states();
        debug_assert_eq!(out.len(), q * q);
        for (idx, h) in out.iter_mut().enumerate() {
            *h = -(field[0] * self.dipole[0][idx]
                + field[1] * self.dipole[1][idx]
                + field[2] * self.dipole[2][idx]);
        }
        for k in 0..q {
            out[k * q + k] += self.energies[k];
        }
    }

    /// The field-dressed Hamiltonian `H[k][k] = e_k − E·μ_kk`,
    /// `H[i][j] = −E·μ_ij`.
    pub fn hamiltonian_at(&self, field: &[f64; 3]) -> DMatrix<f64> {
        let q = self.n_states();
        let mut buf = vec![0.0; q * q];
        self.fill_hamiltonian(field, &mut buf);
        DMatrix::from_row_slice(q, q, &buf)
    }

    /// Largest excitation energy above the ground state.
    pub fn spectral_width(&self) -> f64 {
        self.energies[self.n_states() - 1] - self.energies[0]
    }

    pub fn to_file(&self) -> SystemFile {
        let q = self.n_states();
        let nested = |mu: &[f64]| MatrixRepr::Nested(mu.chunks(q).map(<[f64]>::to_vec).collect());
        SystemFile {
            n_states: q,
            energies: self.energies.clone(),
            dipole_x: nested(&self.dipole[0]),
            dipole_y: nested(&self.dipole[1]),
            dipole_z: nested(&self.dipole[2]),
            labels: self.labels.clone(),
            units: Some("atomic".to_string()),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SystemFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("system serializes")
    }
}

/// A `Q×Q` matrix written either as nested rows or as one flat row-major array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixRepr {
    Nested(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

impl MatrixRepr {
    fn into_flat(self, q: usize, name: &str) -> Result<Vec<f64>> {
        match self {
            MatrixRepr::Flat(v) => Ok(v),
            MatrixRepr::Nested(rows) => {
                if rows.len() != q || rows.iter().any(|r| r.len() != q) {
                    return Err(Error::invalid(format!("{name} must be {q}x{q}")));
                }
                Ok(rows.into_iter().flatten().collect())
            }
        }
    }
}

/// On-disk representation of a [`MolecularSystem`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub n_states: usize,
    pub energies: Vec<f64>,
    pub dipole_x: MatrixRepr,
    pub dipole_y: MatrixRepr,
    pub dipole_z: MatrixRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<String>,
}

impl TryFrom<SystemFile> for MolecularSystem {
    type Error = Error;

    fn try_from(file: SystemFile) -> Result<Self> {
        if let Some(units) = &file.units {
            if !units.eq_ignore_ascii_case("atomic") && !units.eq_ignore_ascii_case("au") {
                return Err(Error::invalid(format!("unsupported units {units:?}; only atomic units")));
            }
        }
        let q = file.n_states;
        if file.energies.len() != q {
            return Err(Error::invalid(format!(
                "n_states = {q} but {} energies given",
                file.energies.len()
            )));
        }
        let dipole = [
            file.dipole_x.into_flat(q, "dipole_x")?,
            file.dipole_y.into_flat(q, "dipole_y")?,
            file.dipole_z.into_flat(q, "dipole_z")?,
        ];
        let system = MolecularSystem::new(file.energies, dipole)?;
        match file.labels {
            Some(labels) => system.with_labels(labels),
            None => Ok(system),
        }
    }
}
