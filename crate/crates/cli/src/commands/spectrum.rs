use hyqoc::export::{num, CsvTable};
use hyqoc::model::{PulseFile, PulseParameters, SpectralLine};
use serde::{Deserialize, Serialize};

use crate::config::{read_file, ExperimentConfig};
use crate::error::CliError;
use crate::output::Output;
use crate::SpectrumArgs;

/// Lines of one pulse as rows `harmonic, omega, |a_x|, |a_y|, |a_z|`.
fn rows(lines: &[SpectralLine]) -> Vec<(usize, f64, [f64; 3])> {
    let mut out: Vec<(usize, f64, [f64; 3])> = Vec::new();
    for l in lines {
        match out.iter_mut().find(|r| r.0 == l.harmonic) {
            Some(r) => r.2[l.axis] = l.amplitude,
            None => {
                let mut a = [0.0; 3];
                a[l.axis] = l.amplitude;
                out.push((l.harmonic, l.omega, a));
            }
        }
    }
    out.sort_by_key(|r| r.0);
    out
}

/// Strongest line of each axis: `(harmonic, omega, amplitude)`.
pub fn dominant_lines(pulse: &PulseParameters) -> [(usize, f64, f64); 3] {
    let mut best = [(0, 0.0, 0.0); 3];
    for l in pulse.spectrum() {
        if l.amplitude > best[l.axis].2 {
            best[l.axis] = (l.harmonic, l.omega, l.amplitude);
        }
    }
    best
}

/// The parts of `run.json` the spectrogram needs.
#[derive(Deserialize)]
struct RunFile {
    best_pulse: PulseFile,
    history: Vec<HistoryRow>,
}

#[derive(Deserialize)]
struct HistoryRow {
    iteration: usize,
    best_amplitudes: Vec<f64>,
}

#[derive(Serialize)]
struct Summary {
    /// Per axis: harmonic, ω and |a| of the strongest line (zero when the axis is silent).
    dominant: Vec<(usize, f64, f64)>,
    iterations: Option<usize>,
}

pub fn run(cfg: &ExperimentConfig, args: &SpectrumArgs, out: &mut Output) -> Result<String, CliError> {
    let run: Option<RunFile> = match &args.run {
        Some(p) => Some(serde_json::from_str(&read_file(p)?).map_err(|e| CliError::config(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let pulse = match (&args.pulse, &run) {
        (Some(p), _) => PulseParameters::from_json(&read_file(p)?)?,
        (None, Some(r)) => PulseParameters::try_from(r.best_pulse.clone())?,
        (None, None) => {
            let problem = cfg.problem(cfg.dt, None)?;
            cfg.pulse(&problem)?
        }
    };
    let mut table = CsvTable::new(["harmonic", "omega", "x", "y", "z"]);
    for (j, w, a) in rows(&pulse.spectrum()) {
        table.push(vec![j.to_string(), num(w), num(a[0]), num(a[1]), num(a[2])]);
    }
    out.csv("spectrum.csv", &table)?;

    let mut iterations = None;
    if let Some(r) = &run {
        let mut gram = CsvTable::new(["iteration", "harmonic", "omega", "x", "y", "z"]);
        for h in &r.history {
            let p = pulse.with_flat_amplitudes(&h.best_amplitudes)?;
            for (j, w, a) in rows(&p.spectrum()) {
                gram.push(vec![
                    h.iteration.to_string(),
                    j.to_string(),
                    num(w),
                    num(a[0]),
                    num(a[1]),
                    num(a[2]),
                ]);
            }
        }
        out.csv("spectrogram.csv", &gram)?;
        iterations = Some(r.history.len());
    }
    let dominant = dominant_lines(&pulse);
    out.json(
        "summary.json",
        &Summary {
            dominant: dominant.to_vec(),
            iterations,
        },
    )?;
    let axes = ['x', 'y', 'z'];
    let text: Vec<String> = dominant
        .iter()
        .zip(axes)
        .map(|((j, w, a), ax)| format!("{ax}: strongest line j={j} ω={w:.5} |a|={a:.3e}"))
        .collect();
    Ok(text.join("\n"))
}
