//! Energy minimization over DMERA angles.

use std::f64::consts::FRAC_PI_2;

use super::optimizer::{optimize_angles, Objective, OptimizationReport, OptimizerConfig, PhiDirection, Sinusoid};
use crate::dmera::layout::{skeleton, Skeleton};
use crate::dmera::{build_dmera, gate_fabric, DmeraSpec, GateFabricParams, Layout};
use crate::lrtim::DenseOperator;
use crate::qsim::PureState;
use crate::{Error, Result, C64};

/// `<psi(theta)|H|psi(theta)>` for the full DMERA state.
pub fn vqe_energy(spec: &DmeraSpec, h: &DenseOperator) -> Result<f64> {
    if h.dim() != 1 << spec.num_qubits() {
        return Err(Error::DimensionMismatch { expected: 1 << spec.num_qubits(), got: h.dim() });
    }
    h.expectation(&build_dmera(spec).simulate())
}

/// Row-compressed copy of a Hamiltonian; the Ising matrices are very sparse.
struct Sparse {
    starts: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl Sparse {
    fn new(h: &DenseOperator) -> Self {
        let d = h.dim();
        let mut starts = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for row in h.data().chunks(d) {
            for (j, v) in row.iter().enumerate() {
                if *v != C64::new(0.0, 0.0) {
                    cols.push(j);
                    vals.push(*v);
                }
            }
            starts.push(cols.len());
        }
        Self { starts, cols, vals }
    }

    fn expectation(&self, psi: &[C64]) -> f64 {
        let mut acc = 0.0;
        for (i, a) in psi.iter().enumerate() {
            let mut hv = C64::new(0.0, 0.0);
            for k in self.starts[i]..self.starts[i + 1] {
                hv += self.vals[k] * psi[self.cols[k]];
            }
            acc += (a.conj() * hv).re;
        }
        acc
    }
}

pub struct VqeObjective {
    skeleton: Skeleton,
    h: Sparse,
    initial: PureState,
}

impl VqeObjective {
    pub fn new(num_qubits: usize, layout: Layout, h: &DenseOperator) -> Result<Self> {
        if h.dim() != 1 << num_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << num_qubits, got: h.dim() });
        }
        let skeleton = skeleton(num_qubits, layout)?;
        let bits: Vec<u8> = skeleton.inits.iter().map(|a| a.bit()).collect();
        Ok(Self { initial: PureState::from_bits(&bits), skeleton, h: Sparse::new(h) })
    }

    fn run_from(&self, mut psi: PureState, angles: &[GateFabricParams], from: usize) -> PureState {
        for (g, &p) in self.skeleton.gates[from..].iter().zip(&angles[from..]) {
            psi.apply_unchecked(g.wires, &gate_fabric(p));
        }
        psi
    }
}

impl Objective for VqeObjective {
    fn num_gates(&self) -> usize {
        self.skeleton.gates.len()
    }

    fn loss(&self, angles: &[GateFabricParams]) -> f64 {
        self.h.expectation(self.run_from(self.initial.clone(), angles, 0).amplitudes())
    }

    // Keeps the state before gate k so each trial only replays the suffix.
    fn sinusoidal_sweep(&self, angles: &mut [GateFabricParams], current: f64) -> (f64, usize) {
        let mut prefix = self.initial.clone();
        let mut f0 = current;
        let mut evals = 0;
        for k in 0..angles.len() {
            let wires = self.skeleton.gates[k].wires;
            for dir in [PhiDirection::Phi0, PhiDirection::Phi1] {
                let base = angles[k];
                let mut trial = |delta: f64| {
                    angles[k] = dir.shift(base, delta);
                    let mut psi = prefix.clone();
                    psi.apply_unchecked(wires, &gate_fabric(angles[k]));
                    self.h.expectation(self.run_from(psi, angles, k + 1).amplitudes())
                };
                let fp = trial(FRAC_PI_2);
                let fm = trial(-FRAC_PI_2);
                evals += 2;
                let s = Sinusoid::fit(f0, fp, fm);
                angles[k] = dir.shift(base, s.argmin());
                f0 = s.min_value().min(f0);
            }
            prefix.apply_unchecked(wires, &gate_fabric(angles[k]));
        }
        (self.h.expectation(prefix.amplitudes()), evals)
    }
}

/// Lowest energy found over the configured restarts.
pub fn vqe_optimize(
    num_qubits: usize,
    layout: Layout,
    h: &DenseOperator,
    opt: &OptimizerConfig,
) -> Result<(DmeraSpec, f64, OptimizationReport)> {
    let obj = VqeObjective::new(num_qubits, layout, h)?;
    let (angles, report) = optimize_angles(&obj, opt, None)?;
    let spec = DmeraSpec::new(num_qubits, layout, angles)?;
    let energy = vqe_energy(&spec, h)?;
    Ok((spec, energy, report))
}
