use hyqoc::encoding::{evolution_circuit, CircuitVariant};
use hyqoc::export::CsvTable;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::Output;

const KINDS: [&str; 9] = ["X", "H", "S", "SDG", "RZ", "RX", "RY", "P", "CNOT"];

pub fn run(cfg: &ExperimentConfig, out: &mut Output) -> Result<String, CliError> {
    let problem = cfg.problem(cfg.dt, None)?;
    let pulse = cfg.pulse(&problem)?;
    let header = ["variant", "qubits", "steps", "one_qubit", "two_qubit", "total"]
        .into_iter()
        .map(String::from)
        .chain(KINDS.iter().map(|k| k.to_string()));
    let mut table = CsvTable::new(header);
    let mut text = Vec::new();
    for v in CircuitVariant::ALL {
        let circuit = evolution_circuit(&problem, &pulse, &problem.grid, v)?;
        let c = circuit.counts();
        let mut row = vec![
            v.name().to_string(),
            circuit.n_qubits().to_string(),
            circuit.n_steps().to_string(),
            c.one_qubit.to_string(),
            c.two_qubit.to_string(),
            c.total().to_string(),
        ];
        row.extend(KINDS.iter().map(|k| c.get(k).to_string()));
        table.push(row);
        text.push(format!("{v}: {} one-qubit, {} two-qubit gates", c.one_qubit, c.two_qubit));
        if v == cfg.variant {
            out.text("circuit.txt", &format!("# {}\n{}", out.comment(), circuit.dump()))?;
        }
    }
    out.csv("gate_counts.csv", &table)?;
    Ok(text.join("\n"))
}
