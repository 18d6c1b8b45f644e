use super::{build_dmera, Circuit, CircuitGate, DmeraSpec};
use crate::qsim::MixedState;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "L" | "l" | "left" | "Left" => Ok(Side::Left),
            "R" | "r" | "right" | "Right" => Ok(Side::Right),
            other => Err(Error::InvalidSubsystem(format!("unknown side `{other}`"))),
        }
    }
}

/// `size` contiguous output qubits at one end of the chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SubsystemSpec {
    pub side: Side,
    pub size: usize,
}

impl SubsystemSpec {
    pub fn new(side: Side, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidSubsystem("size must be at least 1".into()));
        }
        Ok(Self { side, size })
    }

    /// Output positions of the block, left to right.
    pub fn wires(&self, num_qubits: usize) -> Result<Vec<usize>> {
        if self.size == 0 || self.size > num_qubits {
            return Err(Error::InvalidSubsystem(format!(
                "size {} does not fit a {num_qubits}-qubit chain",
                self.size
            )));
        }
        Ok(match self.side {
            Side::Left => (0..self.size).collect(),
            Side::Right => (num_qubits - self.size..num_qubits).collect(),
        })
    }
}

/// The gates and wires that can influence a set of outputs, relabeled onto a
/// compact register.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeCircuit {
    /// Compact circuit; its `inits` carry the ancilla record of the kept wires.
    pub circuit: Circuit,
    /// `output_map[i]` is the compact wire holding the i-th requested output.
    pub output_map: Vec<usize>,
    /// Original wire index of every compact wire.
    pub source_wires: Vec<usize>,
    /// Original index of every kept gate.
    pub source_gates: Vec<usize>,
}

impl ConeCircuit {
    pub fn num_physical(&self) -> usize {
        self.circuit.num_wires
    }

    /// Reduced state of the outputs. The cone is pure before the trace, so the
    /// statevector backend gives the same matrix as density-matrix simulation.
    pub fn reduced_state(&self) -> MixedState {
        self.circuit.simulate().partial_trace(&self.output_map).expect("output map is valid")
    }

    /// Same as [`reduced_state`](Self::reduced_state) through the density-matrix backend.
    pub fn reduced_state_mixed(&self) -> MixedState {
        self.circuit.simulate_mixed().partial_trace(&self.output_map).expect("output map is valid")
    }
}

/// Backward light-cone of `outputs` in `circuit`.
pub fn circuit_cone(circuit: &Circuit, outputs: &[usize]) -> Result<ConeCircuit> {
    crate::qsim::validate_keep(outputs, circuit.num_wires)
        .map_err(|e| Error::InvalidSubsystem(e.to_string()))?;
    let mut needed = vec![false; circuit.num_wires];
    outputs.iter().for_each(|&w| needed[w] = true);
    let mut kept = Vec::new();
    for (i, g) in circuit.gates.iter().enumerate().rev() {
        if needed[g.wires.0] || needed[g.wires.1] {
            needed[g.wires.0] = true;
            needed[g.wires.1] = true;
            kept.push(i);
        }
    }
    kept.reverse();

    let source_wires: Vec<usize> = (0..circuit.num_wires).filter(|&w| needed[w]).collect();
    let mut compact = vec![usize::MAX; circuit.num_wires];
    for (c, &w) in source_wires.iter().enumerate() {
        compact[w] = c;
    }
    let gates = kept
        .iter()
        .map(|&i| {
            let g = circuit.gates[i];
            CircuitGate { wires: (compact[g.wires.0], compact[g.wires.1]), params: g.params }
        })
        .collect();
    let inits = source_wires.iter().map(|&w| circuit.inits[w]).collect();
    Ok(ConeCircuit {
        circuit: Circuit::new(inits, gates)?,
        output_map: outputs.iter().map(|&w| compact[w]).collect(),
        source_wires,
        source_gates: kept,
    })
}

pub fn causal_cone(spec: &DmeraSpec, sub: SubsystemSpec) -> Result<ConeCircuit> {
    let outputs = sub.wires(spec.num_qubits())?;
    circuit_cone(&build_dmera(spec), &outputs)
}

/// Two angles per kept gate.
pub fn count_angles(cone: &ConeCircuit) -> usize {
    2 * cone.circuit.gates.len()
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// `log2 N + sum_{i=1}^{log2 N} ceil(M / 2^i)`.
pub fn predicted_qubits_left(num_qubits: usize, m: usize) -> usize {
    let n = num_qubits.trailing_zeros() as usize;
    n + (1..=n).map(|i| ceil_div(m, 1 << i)).sum::<usize>()
}

/// `sum_{i=1}^{log2 N} ceil(M_i / 2)` with `M_i = ceil(M_{i-1} / 2) + 1` and
/// `M_0 = M`, evaluated as written.
pub fn predicted_qubits_right(num_qubits: usize, m: usize) -> usize {
    let n = num_qubits.trailing_zeros() as usize;
    let mut mi = m;
    let mut total = 0;
    for _ in 1..=n {
        mi = ceil_div(mi, 2) + 1;
        total += ceil_div(mi, 2);
    }
    total
}
