//! DMERA construction, causal cones and cone-size bookkeeping.

pub mod calibrate;
mod circuit;
mod cone;
pub mod fabric;
pub mod layout;

pub use circuit::{Circuit, CircuitGate};
pub use cone::{
    causal_cone, circuit_cone, count_angles, predicted_qubits_left, predicted_qubits_right, ConeCircuit, Side,
    SubsystemSpec,
};
pub use fabric::{decompose_gate, gate_fabric, swap_isometry_inputs, Ancilla, GateFabricParams};
pub use layout::Layout;

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Angles of a DMERA with two layers per renormalization step, one pair per
/// gate in construction order.
#[derive(Clone, Debug, PartialEq)]
pub struct DmeraSpec {
    num_qubits: usize,
    layout: Layout,
    angles: Vec<GateFabricParams>,
}

impl DmeraSpec {
    pub fn new(num_qubits: usize, layout: Layout, angles: Vec<GateFabricParams>) -> Result<Self> {
        let expected = layout::gate_count(num_qubits, layout)?;
        if angles.len() != expected {
            return Err(Error::AngleCount { expected, got: angles.len() });
        }
        if angles.iter().any(|p| !p.theta0.is_finite() || !p.theta1.is_finite()) {
            return Err(Error::InvalidParameter("angles must be finite".into()));
        }
        Ok(Self { num_qubits, layout, angles })
    }

    pub fn zeros(num_qubits: usize, layout: Layout) -> Result<Self> {
        let count = layout::gate_count(num_qubits, layout)?;
        Self::new(num_qubits, layout, vec![GateFabricParams::default(); count])
    }

    /// Every angle uniform in `[-pi, pi)`.
    pub fn random(num_qubits: usize, layout: Layout, seed: u64) -> Result<Self> {
        let count = layout::gate_count(num_qubits, layout)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let angles = (0..count)
            .map(|_| GateFabricParams::new(rng.random_range(-PI..PI), rng.random_range(-PI..PI)))
            .collect();
        Self::new(num_qubits, layout, angles)
    }

    /// Flat angle list `[t0, t1, t0, t1, ...]`.
    pub fn from_flat(num_qubits: usize, layout: Layout, flat: &[f64]) -> Result<Self> {
        let angles = flat.chunks(2).map(|c| GateFabricParams::new(c[0], *c.get(1).unwrap_or(&f64::NAN))).collect();
        Self::new(num_qubits, layout, angles)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn angles(&self) -> &[GateFabricParams] {
        &self.angles
    }

    pub fn flat_angles(&self) -> Vec<f64> {
        self.angles.iter().flat_map(|p| [p.theta0, p.theta1]).collect()
    }
}

/// Full circuit over `N` wires (wire index = output position).
pub fn build_dmera(spec: &DmeraSpec) -> Circuit {
    let sk = layout::skeleton(spec.num_qubits, spec.layout).expect("validated on construction");
    let gates = sk
        .gates
        .iter()
        .zip(&spec.angles)
        .map(|(g, &params)| CircuitGate { wires: g.wires, params })
        .collect();
    Circuit { num_wires: spec.num_qubits, inits: sk.inits, gates }
}
