use std::fs;
use std::path::{Path, PathBuf};

use hyqoc::circuit::Circuit;
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> i32 {
    hyqoc_cli::run(std::iter::once("hyqoc").chain(args.iter().copied()))
}

fn run_in(dir: &Path, name: &str, args: &[&str]) -> (i32, PathBuf) {
    let out = dir.join(name);
    let mut all = args.to_vec();
    let o = out.to_str().unwrap().to_string();
    all.push("--out");
    all.push(&o);
    (run(&all), out)
}

fn config(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p.to_str().unwrap().to_string()
}

fn summary(out: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap()
}

/// Data rows of a CSV written by the tool, split into cells.
fn rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(2)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn propagate_compares_backends() {
    let tmp = TempDir::new().unwrap();
    let (code, out) = run_in(tmp.path(), "p", &["propagate"]);
    assert_eq!(code, 0);
    let s = summary(&out);
    assert!(s["max_deviation"]["circuit:1"].as_f64().unwrap() < 0.02);
    assert_eq!(s["threshold_exceeded"], false);
    let text = fs::read_to_string(out.join("deviation.csv")).unwrap();
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("# hyqoc ") && first.contains("config_sha256=") && first.ends_with("seed=0"));
    assert_eq!(text.lines().nth(1), Some("time,delta_circuit:1"));
    assert_eq!(rows(&out.join("populations_euler_0.01.csv")).len(), 251);
}

#[test]
fn coarse_trotter_step_is_flagged() {
    let tmp = TempDir::new().unwrap();
    let cfg = config(tmp.path(), "c.json", r#"{"pulse": "benchmark"}"#);
    let (code, out) = run_in(tmp.path(), "p", &["propagate", "--config", &cfg, "--backend", "euler:0.01,circuit:5"]);
    assert_eq!(code, 0);
    let s = summary(&out);
    assert!(s["max_deviation"]["circuit:5"].as_f64().unwrap() > 0.02);
    assert_eq!(s["threshold_exceeded"], true);
}

#[test]
fn zero_pulse_keeps_populations_flat() {
    let tmp = TempDir::new().unwrap();
    let cfg = config(tmp.path(), "c.json", r#"{"pulse": "zero"}"#);
    let (code, out) = run_in(tmp.path(), "p", &["propagate", "--config", &cfg, "--backend", "exact,circuit:1"]);
    assert_eq!(code, 0);
    for name in ["populations_exact.csv", "populations_circuit_1.csv"] {
        for row in rows(&out.join(name)) {
            let p0: f64 = row[1].parse().unwrap();
            assert!((p0 - 1.0).abs() < 1e-12, "{name}: {row:?}");
        }
    }
}

#[test]
fn noisy_and_sampled_propagation() {
    let tmp = TempDir::new().unwrap();
    let args = ["propagate", "--backend", "exact,circuit:1", "--noise", "mixed", "--readout", "sampled", "--shots", "4096"];
    let (code, out) = run_in(tmp.path(), "p", &args);
    assert_eq!(code, 0);
    // noise visibly pulls the circuit away from the closed-system reference
    let d = summary(&out)["max_deviation"]["circuit:1"].as_f64().unwrap();
    assert!(d > 0.05 && d < 0.6, "{d}");
}

#[test]
fn ga_run_is_reproducible_and_reevaluates() {
    let tmp = TempDir::new().unwrap();
    let args = ["optimize", "--seed", "2", "--reevaluate", "circuit:1"];
    let (c1, a) = run_in(tmp.path(), "a", &args);
    let (c2, b) = run_in(tmp.path(), "b", &args);
    assert_eq!((c1, c2), (0, 0));
    for f in ["history.csv", "best_pulse.json", "run.json", "summary.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let s = summary(&a);
    assert!(s["best"]["target_population"].as_f64().unwrap() >= 0.95);
    assert!(s["reevaluation"]["evaluation"]["target_population"].as_f64().unwrap() >= 0.95);
    let (c3, c) = run_in(tmp.path(), "c", &["optimize", "--seed", "3"]);
    assert_eq!(c3, 0);
    assert_ne!(fs::read(a.join("history.csv")).unwrap(), fs::read(c.join("history.csv")).unwrap());
}

#[test]
fn nelder_mead_trails_the_ga_at_equal_budget() {
    let tmp = TempDir::new().unwrap();
    let (_, ga) = run_in(tmp.path(), "ga", &["optimize"]);
    let (code, nm) = run_in(tmp.path(), "nm", &["optimize", "--method", "nelder-mead", "--max-iter", "30"]);
    assert_eq!(code, 0);
    let p = |d: &Path| summary(d)["best"]["target_population"].as_f64().unwrap();
    assert!(p(&nm) < p(&ga));
}

#[test]
fn quasi_newton_pulse_peaks_at_the_transition() {
    let tmp = TempDir::new().unwrap();
    let (code, qn) = run_in(tmp.path(), "qn", &["optimize", "--method", "quasi-newton", "--max-iter", "20"]);
    assert_eq!(code, 0);
    let run_json = qn.join("run.json");
    let (code, sp) = run_in(tmp.path(), "sp", &["spectrum", "--run", run_json.to_str().unwrap()]);
    assert_eq!(code, 0);
    let s = summary(&sp);
    // the 0 → 1 gap of the fixture is 0.125 hartree, closest to harmonic 10
    assert_eq!(s["dominant"][0][0], 10);
    let gram = rows(&sp.join("spectrogram.csv"));
    let iterations = s["iterations"].as_u64().unwrap() as usize;
    assert_eq!(gram.len() % iterations, 0);
}

#[test]
fn spectrum_of_simple_pulses() {
    let tmp = TempDir::new().unwrap();
    let (code, out) = run_in(tmp.path(), "g", &["spectrum"]);
    assert_eq!(code, 0);
    let nonzero: Vec<Vec<String>> = rows(&out.join("spectrum.csv"))
        .into_iter()
        .filter(|r| r[2..].iter().any(|v| v.parse::<f64>().unwrap() != 0.0))
        .collect();
    assert_eq!(nonzero.len(), 1);
    assert_eq!(nonzero[0][0], "10");
    let cfg = config(tmp.path(), "z.json", r#"{"pulse": "zero"}"#);
    let (_, out) = run_in(tmp.path(), "z", &["spectrum", "--config", &cfg]);
    for r in rows(&out.join("spectrum.csv")) {
        assert!(r[2..].iter().all(|v| v == "0"));
    }
}

#[test]
fn noise_study_outputs() {
    let tmp = TempDir::new().unwrap();
    let (code, out) = run_in(tmp.path(), "n", &["noise-study"]);
    assert_eq!(code, 0);
    for r in rows(&out.join("fidelity.csv")) {
        assert!((r[2].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
    }
    // the fixture couples states 0 and 2, which are not adjacent qubits
    let counts = rows(&out.join("gate_counts.csv"));
    let two_qubit = |variant: &str, steps: &str| -> usize {
        counts.iter().find(|r| r[0] == variant && r[1] == steps).unwrap()[3].parse().unwrap()
    };
    assert!(two_qubit("jw-full", "250") > two_qubit("single-occ", "250"));
    assert_eq!(two_qubit("single-occ", "0"), 0);

    let noise = config(tmp.path(), "noise.json", r#"{"p_depol_1q": 0.01, "p_depol_2q": 0.02}"#);
    let (code, out) = run_in(tmp.path(), "c", &["noise-study", "--noise", &format!("custom:{noise}")]);
    assert_eq!(code, 0);
    let f = summary(&out)["final_fidelity"].as_f64().unwrap();
    assert!(f < 0.9);
}

#[test]
fn bench_reports_scaling_laws() {
    let tmp = TempDir::new().unwrap();
    let (code, out) = run_in(tmp.path(), "b", &["bench"]);
    assert_eq!(code, 0);
    let s = summary(&out);
    assert!((s["two_qubit_exponent_in_steps"].as_f64().unwrap() - 1.0).abs() < 0.01);
    assert!((s["two_qubit_exponent_in_qubits"].as_f64().unwrap() - 2.0).abs() < 0.1);
    let errs: Vec<(f64, f64)> = s["trotter_error"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_f64().unwrap(), p[1].as_f64().unwrap()))
        .collect();
    for w in errs.windows(2) {
        if (w[1].0 / w[0].0 - 2.0).abs() < 1e-12 {
            let ratio = w[1].1 / w[0].1;
            assert!((1.5..=2.5).contains(&ratio), "{ratio}");
        }
    }
}

#[test]
fn gate_count_dump_parses_back() {
    let tmp = TempDir::new().unwrap();
    let (code, out) = run_in(tmp.path(), "g", &["gate-count", "--variant", "jw-full"]);
    assert_eq!(code, 0);
    let c = Circuit::parse(&fs::read_to_string(out.join("circuit.txt")).unwrap()).unwrap();
    assert_eq!(c.n_steps(), 250);
    let table = rows(&out.join("gate_counts.csv"));
    let jw = table.iter().find(|r| r[0] == "jw-full").unwrap();
    assert_eq!(jw[4], c.counts().two_qubit.to_string());
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let bad = config(tmp.path(), "bad.json", r#"{"sytem": "fixture:cyan3"}"#);
    assert_eq!(run_in(tmp.path(), "a", &["propagate", "--config", &bad]).0, 2);
    let unknown = config(tmp.path(), "u.json", r#"{"system": "fixture:benzene"}"#);
    assert_eq!(run_in(tmp.path(), "b", &["propagate", "--config", &unknown]).0, 2);
    assert_eq!(run_in(tmp.path(), "c", &["propagate", "--noise", "loud"]).0, 2);
    assert_eq!(run_in(tmp.path(), "d", &["frobnicate"]).0, 2);
    let big = config(tmp.path(), "big.json", r#"{"system": "fixture:cyan11"}"#);
    assert_eq!(run_in(tmp.path(), "e", &["noise-study", "--config", &big]).0, 4);

    // a field so strong that explicit Euler overflows
    let pulse = config(
        tmp.path(),
        "huge.json",
        r#"{"duration": 250, "n_harmonics": 1, "include_dc": true,
            "amplitudes": [[1e150, 0], [0, 0], [0, 0]]}"#,
    );
    let cfg = config(tmp.path(), "h.json", &format!(r#"{{"pulse": "{pulse}", "n_harmonics": 1}}"#));
    assert_eq!(run_in(tmp.path(), "f", &["propagate", "--config", &cfg, "--backend", "euler:0.01"]).0, 3);
}

#[test]
fn relative_paths_resolve_against_the_config() {
    let tmp = TempDir::new().unwrap();
    let sub = tmp.path().join("inputs");
    fs::create_dir(&sub).unwrap();
    fs::write(sub.join("two.json"), hyqoc::fixtures::two_level().to_json()).unwrap();
    let cfg = config(&sub, "c.json", r#"{"system": "two.json", "backend": "exact"}"#);
    let (code, out) = run_in(tmp.path(), "p", &["propagate", "--config", &cfg]);
    assert_eq!(code, 0);
    assert_eq!(rows(&out.join("populations_exact.csv"))[0].len(), 3);
}
