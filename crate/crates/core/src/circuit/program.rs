use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::Gate;
use crate::error::{Error, Result};
use crate::export::CsvTable;

/// An ordered gate list on `n_qubits` qubits, optionally divided into steps.
///
/// Gates before the first step mark form the preamble (state preparation);
/// `prefix(j)` keeps the preamble plus the first `j` steps.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    step_starts: Vec<usize>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Circuit("a circuit needs at least one qubit".into()));
        }
        Ok(Self {
            n_qubits,
            gates: Vec::new(),
            step_starts: Vec::new(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends all gates of `other` (its step marks are dropped).
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::Circuit(format!(
                "cannot append a {}-qubit circuit to a {}-qubit one",
                other.n_qubits, self.n_qubits
            )));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// Starts a new step at the current end of the gate list.
    pub fn mark_step(&mut self) {
        self.step_starts.push(self.gates.len());
    }

    pub fn n_steps(&self) -> usize {
        self.step_starts.len()
    }

    /// Gate index range of step `j` (0-based).
    pub fn step_range(&self, j: usize) -> Option<std::ops::Range<usize>> {
        let start = *self.step_starts.get(j)?;
        let end = self.step_starts.get(j + 1).copied().unwrap_or(self.gates.len());
        Some(start..end)
    }

    fn prefix_end(&self, steps: usize) -> usize {
        self.step_starts.get(steps).copied().unwrap_or(self.gates.len())
    }

    /// Preamble plus the first `steps` steps (everything if `steps ≥ n_steps`).
    pub fn prefix(&self, steps: usize) -> Circuit {
        let end = self.prefix_end(steps);
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates[..end].to_vec(),
            step_starts: self.step_starts.iter().copied().take(steps).collect(),
        }
    }

    /// Gates of step `j` as a standalone circuit.
    pub fn step(&self, j: usize) -> Option<Circuit> {
        let r = self.step_range(j)?;
        Some(Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates[r].to_vec(),
            step_starts: Vec::new(),
        })
    }

    pub fn counts(&self) -> GateCounts {
        GateCounts::of(&self.gates)
    }

    /// Line-oriented text form: a `qubits N` header, then one gate per line
    /// with `# step j` comments at step boundaries.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "qubits {}", self.n_qubits);
        let mut marks = self.step_starts.iter().enumerate().peekable();
        for (i, g) in self.gates.iter().enumerate() {
            while let Some((j, _)) = marks.next_if(|(_, &s)| s == i) {
                let _ = writeln!(out, "# step {j}");
            }
            let _ = writeln!(out, "{g}");
        }
        for (j, _) in marks {
            let _ = writeln!(out, "# step {j}");
        }
        out
    }

    /// Inverse of [`Circuit::dump`]. Blank lines, comments before the header
    /// and comments other than step marks are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .skip_while(|l| l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty circuit dump".into()))?;
        let n = header
            .strip_prefix("qubits")
            .and_then(|s| s.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("expected `qubits N`, found `{header}`")))?;
        let mut circuit = Circuit::new(n)?;
        for line in lines {
            if let Some(comment) = line.strip_prefix('#') {
                if comment.trim().starts_with("step") {
                    circuit.mark_step();
                }
                continue;
            }
            circuit.push(Gate::parse(line)?)?;
        }
        Ok(circuit)
    }
}

/// Gate tallies per kind plus arity totals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GateCounts {
    pub by_kind: BTreeMap<&'static str, usize>,
    pub one_qubit: usize,
    pub two_qubit: usize,
}

impl GateCounts {
    pub fn of(gates: &[Gate]) -> Self {
        let mut counts = Self::default();
        for g in gates {
            *counts.by_kind.entry(g.kind()).or_default() += 1;
            if g.arity() == 2 {
                counts.two_qubit += 1;
            } else {
                counts.one_qubit += 1;
            }
        }
        counts
    }

    pub fn total(&self) -> usize {
        self.one_qubit + self.two_qubit
    }

    pub fn get(&self, kind: &str) -> usize {
        self.by_kind.get(kind).copied().unwrap_or(0)
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(["kind", "count"]);
        for (k, v) in &self.by_kind {
            t.push(vec![k.to_string(), v.to_string()]);
        }
        t.push(vec!["one_qubit".into(), self.one_qubit.to_string()]);
        t.push(vec!["two_qubit".into(), self.two_qubit.to_string()]);
        t.push(vec!["total".into(), self.total().to_string()]);
        t
    }
}
