//! wasm-bindgen bindings for the static demo page in `www/`. Every export
//! returns a JSON string; the plain `*_json` functions are the same operations
//! without the JS boundary so they can be tested natively.

use qdmera::dmera::{
    build_dmera, causal_cone, count_angles, predicted_qubits_left, predicted_qubits_right, DmeraSpec, Layout,
    Side, SubsystemSpec,
};
use qdmera::lrtim::{exact_ground_state, exact_subsystem_entropy, lrtim_hamiltonian, LrtimParams, MAX_DENSE_SPINS};
use qdmera::qsim::{hermitian_eigenvalues, von_neumann_entropy};
use qdmera::variational::{vqse_diagonalize, OptimizerConfig, VqseCost};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

#[derive(Debug, thiserror::Error)]
pub enum DemoError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Sim(#[from] qdmera::Error),
}

pub type Result<T> = std::result::Result<T, DemoError>;

/// The demo runs on the main thread, so keep subsystems small.
pub const MAX_DEMO_QUBITS: usize = 16;
pub const MAX_DEMO_M: usize = 3;

fn parse_side(side: &str) -> Result<Side> {
    match side {
        "L" | "l" | "left" => Ok(Side::Left),
        "R" | "r" | "right" => Ok(Side::Right),
        other => Err(DemoError::Input(format!("side must be L or R, got {other:?}"))),
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_DEMO_QUBITS {
        return Err(DemoError::Input(format!("the demo is limited to N <= {MAX_DEMO_QUBITS}")));
    }
    Ok(())
}

/// Every gate of the full circuit, tagged with whether it sits in the cone of
/// the chosen subsystem, plus the cone's size against the closed forms.
pub fn cone_geometry_json(n: usize, side: &str, m: usize) -> Result<Value> {
    check_size(n)?;
    let side = parse_side(side)?;
    let spec = DmeraSpec::zeros(n, Layout::CALIBRATED)?;
    let sub = SubsystemSpec::new(side, m)?;
    let outputs = sub.wires(n)?;
    let cone = causal_cone(&spec, sub)?;
    let circuit = build_dmera(&spec);
    let gates: Vec<Value> = circuit
        .gates
        .iter()
        .enumerate()
        .map(|(k, g)| json!({ "wires": [g.wires.0, g.wires.1], "in_cone": cone.source_gates.contains(&k) }))
        .collect();
    let predicted = match side {
        Side::Left => predicted_qubits_left(n, m),
        Side::Right => predicted_qubits_right(n, m),
    };
    Ok(json!({
        "num_qubits": n,
        "outputs": outputs,
        "cone_wires": cone.source_wires,
        "gates": gates,
        "cone_qubits": cone.num_physical(),
        "predicted_qubits": predicted,
        "angles": count_angles(&cone),
    }))
}

/// Exact ground-state energy and edge entropy of an `m`-spin block on a grid
/// of transverse fields.
pub fn lrtim_curve_json(n: usize, alpha: f64, m: usize, h_min: f64, h_max: f64, points: usize) -> Result<Value> {
    if n > MAX_DENSE_SPINS.min(10) {
        return Err(DemoError::Input("the demo is limited to N <= 10 spins".into()));
    }
    if points < 2 || !(h_min < h_max) {
        return Err(DemoError::Input("need at least two points and h_min < h_max".into()));
    }
    let sub = SubsystemSpec::new(Side::Left, m)?;
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let h = h_min + (h_max - h_min) * i as f64 / (points - 1) as f64;
        let (energy, state) = exact_ground_state(&lrtim_hamiltonian(&LrtimParams::new(n, h, alpha))?)?;
        rows.push(json!({ "h": h, "energy": energy, "entropy": exact_subsystem_entropy(&state, sub)? }));
    }
    Ok(Value::Array(rows))
}

/// Trains a diagonalizer on the cone state of a random DMERA and compares its
/// spectrum with exact diagonalization.
pub fn vqse_spectrum_json(n: usize, side: &str, m: usize, seed: u64) -> Result<Value> {
    check_size(n)?;
    if m > MAX_DEMO_M {
        return Err(DemoError::Input(format!("the demo is limited to M <= {MAX_DEMO_M}")));
    }
    let spec = DmeraSpec::random(n, Layout::CALIBRATED, seed)?;
    let rho = causal_cone(&spec, SubsystemSpec::new(parse_side(side)?, m)?)?.reduced_state();
    let opt = OptimizerConfig { restarts: 4, seed, ..Default::default() };
    let (_, est, report) = vqse_diagonalize(&rho, &VqseCost::linear(m), &opt)?;
    let mut exact = hermitian_eigenvalues(&rho);
    exact.sort_by(|a, b| b.total_cmp(a));
    Ok(json!({
        "estimate": est.lambdas,
        "exact": exact,
        "estimated_entropy": est.entropy,
        "exact_entropy": von_neumann_entropy(&rho),
        "loss": report.loss,
    }))
}

fn to_js(v: Result<Value>) -> std::result::Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn cone_geometry(n: usize, side: &str, m: usize) -> std::result::Result<String, JsError> {
    to_js(cone_geometry_json(n, side, m))
}

#[wasm_bindgen]
pub fn lrtim_curve(n: usize, alpha: f64, m: usize, h_min: f64, h_max: f64, points: usize) -> std::result::Result<String, JsError> {
    to_js(lrtim_curve_json(n, alpha, m, h_min, h_max, points))
}

#[wasm_bindgen]
pub fn vqse_spectrum(n: usize, side: &str, m: usize, seed: u32) -> std::result::Result<String, JsError> {
    to_js(vqse_spectrum_json(n, side, m, seed as u64))
}
