use hyqoc_wasm::{compare_json, ga_json, noise_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn comparison_reproduces_the_step_threshold() {
    let fine = parse(compare_json(0.004, 1.0).unwrap());
    let coarse = parse(compare_json(0.004, 5.0).unwrap());
    assert!(fine["max_deviation"].as_f64().unwrap() < 0.02);
    assert!(coarse["max_deviation"].as_f64().unwrap() > 0.02);
    assert_eq!(fine["times"].as_array().unwrap().len(), 251);
    assert_eq!(fine["euler"][0], serde_json::json!([1.0, 0.0, 0.0]));
    assert!(compare_json(0.004, 3.0).is_err());
}

#[test]
fn zero_noise_keeps_full_fidelity_and_strong_noise_hits_the_floor() {
    let clean = parse(noise_json(0.0, 0.0).unwrap());
    assert!(floats(&clean["fidelity"]).iter().all(|f| (f - 1.0).abs() < 1e-9));
    let loud = parse(noise_json(0.01, 0.01).unwrap());
    let f = floats(&loud["fidelity"]);
    assert_eq!(f.len(), 251);
    assert!((f[250] - 0.125).abs() < 1e-6);
    assert!(noise_json(1.5, 0.0).is_err());
}

#[test]
fn short_ga_run_is_deterministic_and_improves() {
    let a = ga_json(3, 4, 16).unwrap();
    assert_eq!(a, ga_json(3, 4, 16).unwrap());
    let v = parse(a);
    let best = floats(&v["best_population"]);
    assert_eq!(best.len(), 8);
    assert!(best.last().unwrap() >= &best[0]);
    assert_eq!(v["evaluations"], 8 * 16);
    assert_eq!(v["spectrum"][0].as_array().unwrap().len(), v["omega"].as_array().unwrap().len());
}
