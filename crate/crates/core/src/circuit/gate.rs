use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Single-qubit 2×2 matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// One primitive gate. Qubit 0 is the least significant bit of a basis index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    X(usize),
    H(usize),
    S(usize),
    Sdg(usize),
    /// `diag(e^{−iθ/2}, e^{iθ/2})`
    Rz(usize, f64),
    /// `exp(−iθX/2)`
    Rx(usize, f64),
    /// `exp(−iθY/2)`
    Ry(usize, f64),
    /// `diag(1, e^{iφ})`
    Phase(usize, f64),
    Cnot { control: usize, target: usize },
}

impl Gate {
    /// Short mnemonic used in dumps and gate-count tables.
    pub fn kind(&self) -> &'static str {
        match self {
            Gate::X(_) => "X",
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::Sdg(_) => "SDG",
            Gate::Rz(..) => "RZ",
            Gate::Rx(..) => "RX",
            Gate::Ry(..) => "RY",
            Gate::Phase(..) => "P",
            Gate::Cnot { .. } => "CNOT",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X(q) | Gate::H(q) | Gate::S(q) | Gate::Sdg(q) => vec![q],
            Gate::Rz(q, _) | Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Phase(q, _) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn arity(&self) -> usize {
        if matches!(self, Gate::Cnot { .. }) {
            2
        } else {
            1
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rz(_, a) | Gate::Rx(_, a) | Gate::Ry(_, a) | Gate::Phase(_, a) => Some(a),
            _ => None,
        }
    }

    /// The 2×2 matrix of a single-qubit gate; `None` for CNOT.
    pub fn matrix(&self) -> Option<Mat2> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Some(match *self {
            Gate::X(_) => [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
            Gate::H(_) => [[c(r, 0.), c(r, 0.)], [c(r, 0.), c(-r, 0.)]],
            Gate::S(_) => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(0., 1.)]],
            Gate::Sdg(_) => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(0., -1.)]],
            Gate::Rz(_, t) => [
                [Complex64::from_polar(1.0, -t / 2.0), c(0., 0.)],
                [c(0., 0.), Complex64::from_polar(1.0, t / 2.0)],
            ],
            Gate::Rx(_, t) => {
                let (s, co) = (t / 2.0).sin_cos();
                [[c(co, 0.), c(0., -s)], [c(0., -s), c(co, 0.)]]
            }
            Gate::Ry(_, t) => {
                let (s, co) = (t / 2.0).sin_cos();
                [[c(co, 0.), c(-s, 0.)], [c(s, 0.), c(co, 0.)]]
            }
            Gate::Phase(_, p) => [[c(1., 0.), c(0., 0.)], [c(0., 0.), Complex64::from_polar(1.0, p)]],
            Gate::Cnot { .. } => return None,
        })
    }

    /// Checks qubit range, distinctness and finiteness of the angle.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        if let Some(q) = qs.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::Circuit(format!("{self}: qubit {q} out of range for {n_qubits} qubits")));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::Circuit(format!("{self}: control and target coincide")));
        }
        if self.angle().is_some_and(|a| !a.is_finite()) {
            return Err(Error::Circuit(format!("{self}: non-finite angle")));
        }
        Ok(())
    }

    /// Parses one dump line `KIND q0 [q1] [angle]`.
    pub fn parse(line: &str) -> Result<Self> {
        let mut it = line.split_whitespace();
        let kind = it.next().ok_or_else(|| Error::Parse("empty gate line".into()))?;
        let rest: Vec<&str> = it.collect();
        let bad = || Error::Parse(format!("malformed gate line `{line}`"));
        let qubit = |s: &str| s.parse::<usize>().map_err(|_| bad());
        let angle = |s: &str| s.parse::<f64>().map_err(|_| bad());
        let gate = match (kind, rest.as_slice()) {
            ("X", [q]) => Gate::X(qubit(q)?),
            ("H", [q]) => Gate::H(qubit(q)?),
            ("S", [q]) => Gate::S(qubit(q)?),
            ("SDG", [q]) => Gate::Sdg(qubit(q)?),
            ("RZ", [q, a]) => Gate::Rz(qubit(q)?, angle(a)?),
            ("RX", [q, a]) => Gate::Rx(qubit(q)?, angle(a)?),
            ("RY", [q, a]) => Gate::Ry(qubit(q)?, angle(a)?),
            ("P", [q, a]) => Gate::Phase(qubit(q)?, angle(a)?),
            ("CNOT", [ctl, tgt]) => Gate::Cnot {
                control: qubit(ctl)?,
                target: qubit(tgt)?,
            },
            _ => return Err(bad()),
        };
        Ok(gate)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        if let Some(a) = self.angle() {
            write!(f, " {a:.16e}")?;
        }
        Ok(())
    }
}
