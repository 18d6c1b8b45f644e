//! Variational diagonalization of a reduced density matrix.
//!
//! A brickwall `U(theta)` of gate-fabric gates rotates `rho`; the loss
//! `sum_i eps_i <i|U rho U^dagger|i>` with increasing `eps` is minimized exactly
//! when `U` maps the eigenvectors of `rho`, largest eigenvalue first, onto
//! `|0>, |1>, ...`. The rotated diagonal then holds the spectrum.

use super::optimizer::{
    optimize_angles, Curvature, Objective, OptimizationReport, OptimizerConfig, PhiDirection, Sinusoid,
};
use crate::dmera::{gate_fabric, GateFabricParams};
use crate::qsim::{adjoint4, entropy_from_probabilities, Counts, Mat4, MixedState};
use crate::{Error, Result, C64};
use std::f64::consts::FRAC_PI_2;

/// Strictly increasing cost weights, one per basis state.
#[derive(Clone, Debug, PartialEq)]
pub struct VqseCost {
    epsilons: Vec<f64>,
}

impl VqseCost {
    pub fn new(epsilons: Vec<f64>) -> Result<Self> {
        let len = epsilons.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        if epsilons.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter("cost weights must be strictly increasing".into()));
        }
        Ok(Self { epsilons })
    }

    /// `eps_i = i` on `m` wires.
    pub fn linear(m: usize) -> Self {
        Self { epsilons: (0..1usize << m).map(|i| i as f64).collect() }
    }

    pub fn epsilons(&self) -> &[f64] {
        &self.epsilons
    }

    pub fn num_wires(&self) -> usize {
        self.epsilons.len().trailing_zeros() as usize
    }

    pub fn evaluate(&self, diagonal: &[f64]) -> f64 {
        self.epsilons.iter().zip(diagonal).map(|(e, p)| e * p).sum()
    }

    /// `sum_i eps_i lambda_i` with the spectrum sorted descending: the global
    /// minimum of the loss.
    pub fn lower_bound(&self, spectrum: &[f64]) -> f64 {
        let mut s = spectrum.to_vec();
        s.sort_by(|a, b| b.total_cmp(a));
        self.evaluate(&s)
    }
}

/// Brickwall bonds of the diagonalizer on `m` wires: `2m - 3` layers
/// alternating between even bonds `(0,1), (2,3), ...` and odd bonds
/// `(1,2), (3,4), ...`, starting with the even ones.
pub fn diagonalizer_bonds(m: usize) -> Result<Vec<(usize, usize)>> {
    if m < 2 {
        return Err(Error::InvalidSubsystem(format!("the diagonalizer needs at least 2 wires, got {m}")));
    }
    let mut bonds = Vec::new();
    for layer in 0..2 * m - 3 {
        let start = layer % 2;
        bonds.extend((start..m - 1).step_by(2).map(|q| (q, q + 1)));
    }
    Ok(bonds)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalizerAnsatz {
    m: usize,
    bonds: Vec<(usize, usize)>,
    angles: Vec<GateFabricParams>,
}

impl DiagonalizerAnsatz {
    /// All-zero angles.
    pub fn new(m: usize) -> Result<Self> {
        let bonds = diagonalizer_bonds(m)?;
        let angles = vec![GateFabricParams::default(); bonds.len()];
        Ok(Self { m, bonds, angles })
    }

    pub fn with_angles(m: usize, angles: Vec<GateFabricParams>) -> Result<Self> {
        let mut a = Self::new(m)?;
        if angles.len() != a.bonds.len() {
            return Err(Error::AngleCount { expected: a.bonds.len(), got: angles.len() });
        }
        a.angles = angles;
        Ok(a)
    }

    pub fn num_wires(&self) -> usize {
        self.m
    }

    pub fn num_gates(&self) -> usize {
        self.bonds.len()
    }

    pub fn bonds(&self) -> &[(usize, usize)] {
        &self.bonds
    }

    pub fn angles(&self) -> &[GateFabricParams] {
        &self.angles
    }

    /// `U rho U^dagger`.
    pub fn rotate(&self, rho: &MixedState) -> Result<MixedState> {
        if rho.num_wires() != self.m {
            return Err(Error::DimensionMismatch { expected: 1 << self.m, got: rho.dim() });
        }
        let mut out = rho.clone();
        for (&wires, &p) in self.bonds.iter().zip(&self.angles) {
            out.apply_unchecked(wires, &gate_fabric(p));
        }
        Ok(out)
    }
}

pub fn vqse_loss(rho: &MixedState, ansatz: &DiagonalizerAnsatz, cost: &VqseCost) -> Result<f64> {
    if cost.epsilons.len() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: cost.epsilons.len() });
    }
    Ok(cost.evaluate(&ansatz.rotate(rho)?.diagonal()))
}

/// Sorted, normalized spectrum with its entropy. `loss` is filled in when the
/// spectrum comes out of an optimization.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEstimate {
    pub lambdas: Vec<f64>,
    pub entropy: f64,
    pub loss: Option<f64>,
}

/// Clamps negatives to zero, renormalizes, sorts descending.
pub fn spectrum_from_values(values: &[f64]) -> Result<SpectrumEstimate> {
    let mut lambdas: Vec<f64> = values.iter().map(|v| v.max(0.0)).collect();
    let total: f64 = lambdas.iter().sum();
    if !(total > 0.0) {
        return Err(Error::AllZero);
    }
    lambdas.iter_mut().for_each(|l| *l /= total);
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let entropy = entropy_from_probabilities(&lambdas)?;
    Ok(SpectrumEstimate { lambdas, entropy, loss: None })
}

pub fn spectrum_from_counts(counts: &Counts) -> Result<SpectrumEstimate> {
    spectrum_from_values(&counts.frequencies())
}

/// Loss of a fixed state under a trainable diagonalizer, with a cached sweep.
pub struct VqseObjective<'a> {
    rho: &'a MixedState,
    bonds: Vec<(usize, usize)>,
    cost_matrix: MixedState,
    cost: &'a VqseCost,
}

impl<'a> VqseObjective<'a> {
    pub fn new(rho: &'a MixedState, cost: &'a VqseCost) -> Result<Self> {
        if cost.epsilons.len() != rho.dim() {
            return Err(Error::DimensionMismatch { expected: rho.dim(), got: cost.epsilons.len() });
        }
        let d = rho.dim();
        let mut e = vec![C64::new(0.0, 0.0); d * d];
        for (i, eps) in cost.epsilons.iter().enumerate() {
            e[i * d + i] = C64::new(*eps, 0.0);
        }
        Ok(Self {
            rho,
            bonds: diagonalizer_bonds(rho.num_wires())?,
            cost_matrix: MixedState::from_raw(rho.num_wires(), e),
            cost,
        })
    }
}

/// `Tr(a b)` for Hermitian `a`, `b`.
fn trace_product(a: &MixedState, b: &MixedState) -> f64 {
    let d = a.dim();
    let (x, y) = (a.matrix(), b.matrix());
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            acc += (x[i * d + j] * y[j * d + i]).re;
        }
    }
    acc
}

impl Objective for VqseObjective<'_> {
    fn num_gates(&self) -> usize {
        self.bonds.len()
    }

    fn loss(&self, angles: &[GateFabricParams]) -> f64 {
        let mut r = self.rho.clone();
        for (&w, &p) in self.bonds.iter().zip(angles) {
            r.apply_unchecked(w, &gate_fabric(p));
        }
        self.cost.evaluate(&r.diagonal())
    }

    // With A_k the state after the first k gates and B_k the cost observable
    // pulled back through gates k+1.., the loss as a function of gate k alone is
    // Tr(B_k G A_{k-1} G^dagger). All B_k come from one backward pass; each
    // forward step refits gate k and advances A.
    fn sinusoidal_sweep(&self, angles: &mut [GateFabricParams], current: f64) -> (f64, usize) {
        let k_max = self.bonds.len();
        let mut backs = Vec::with_capacity(k_max);
        let mut b = self.cost_matrix.clone();
        backs.push(b.clone());
        for k in (1..k_max).rev() {
            b.apply_unchecked(self.bonds[k], &adjoint4(&gate_fabric(angles[k])));
            backs.push(b.clone());
        }
        backs.reverse();

        let mut a = self.rho.clone();
        let mut f0 = current;
        let mut evals = 0;
        for k in 0..k_max {
            let eval_at = |p: GateFabricParams| {
                let mut x = a.clone();
                x.apply_unchecked(self.bonds[k], &gate_fabric(p));
                trace_product(&backs[k], &x)
            };
            for dir in [PhiDirection::Phi0, PhiDirection::Phi1] {
                let base = angles[k];
                let s = Sinusoid::fit(f0, eval_at(dir.shift(base, FRAC_PI_2)), eval_at(dir.shift(base, -FRAC_PI_2)));
                evals += 2;
                angles[k] = dir.shift(base, s.argmin());
                f0 = s.min_value().min(f0);
            }
            a.apply_unchecked(self.bonds[k], &gate_fabric(angles[k]));
        }
        (self.cost.evaluate(&a.diagonal()), evals)
    }

    // For every singly shifted gate k the shifted state is carried forward
    // once, and each later gate j is shifted against the cached B_j.
    fn curvature(&self, angles: &[GateFabricParams], f0: f64) -> Curvature {
        let k_max = self.bonds.len();
        let gates: Vec<Mat4> = angles.iter().map(|&p| gate_fabric(p)).collect();
        let mut backs = Vec::with_capacity(k_max);
        let mut b = self.cost_matrix.clone();
        backs.push(b.clone());
        for k in (1..k_max).rev() {
            b.apply_unchecked(self.bonds[k], &adjoint4(&gates[k]));
            backs.push(b.clone());
        }
        backs.reverse();

        let n = 2 * k_max;
        let mut c = Curvature::zeros(n);
        // pair[(i * n + j) * 4 + slot] = f(s_i, s_j) for i < j
        let mut pair = vec![0.0; n * n * 4];
        let mut single = vec![[0.0; 2]; n];
        let signs = [FRAC_PI_2, -FRAC_PI_2];
        let mut a = self.rho.clone();
        let mut evals = 0;
        for k in 0..k_max {
            let eval_shifted = |state: &MixedState, j: usize, p: GateFabricParams| {
                let mut x = state.clone();
                x.apply_unchecked(self.bonds[j], &gate_fabric(p));
                trace_product(&backs[j], &x)
            };
            for d in 0..2 {
                let i = 2 * k + d;
                for (si, &shift_i) in signs.iter().enumerate() {
                    let pk = PhiDirection::of_coordinate(i).shift(angles[k], shift_i);
                    single[i][si] = eval_shifted(&a, k, pk);
                    evals += 1;
                    if d == 0 {
                        for (sj, &shift_j) in signs.iter().enumerate() {
                            pair[(i * n + i + 1) * 4 + 2 * si + sj] =
                                eval_shifted(&a, k, PhiDirection::Phi1.shift(pk, shift_j));
                            evals += 1;
                        }
                    }
                    let mut y = a.clone();
                    y.apply_unchecked(self.bonds[k], &gate_fabric(pk));
                    for jg in k + 1..k_max {
                        for j in [2 * jg, 2 * jg + 1] {
                            for (sj, &shift_j) in signs.iter().enumerate() {
                                let pj = PhiDirection::of_coordinate(j).shift(angles[jg], shift_j);
                                pair[(i * n + j) * 4 + 2 * si + sj] = eval_shifted(&y, jg, pj);
                                evals += 1;
                            }
                        }
                        y.apply_unchecked(self.bonds[jg], &gates[jg]);
                    }
                }
            }
            a.apply_unchecked(self.bonds[k], &gates[k]);
        }
        for i in 0..n {
            c.set_single(i, f0, single[i][0], single[i][1]);
            for j in i + 1..n {
                let f = &pair[(i * n + j) * 4..(i * n + j) * 4 + 4];
                c.set_mixed(i, j, [f[0], f[1], f[2], f[3]]);
            }
        }
        c.evaluations = evals;
        c
    }
}

/// Trains a diagonalizer on `rho` and reads off its spectrum.
pub fn vqse_diagonalize(
    rho: &MixedState,
    cost: &VqseCost,
    opt: &OptimizerConfig,
) -> Result<(DiagonalizerAnsatz, SpectrumEstimate, OptimizationReport)> {
    let obj = VqseObjective::new(rho, cost)?;
    let (angles, report) = optimize_angles(&obj, opt, None)?;
    let ansatz = DiagonalizerAnsatz::with_angles(rho.num_wires(), angles)?;
    let rotated = ansatz.rotate(rho)?;
    let mut spectrum = spectrum_from_values(&rotated.diagonal())?;
    spectrum.loss = Some(report.loss);
    Ok((ansatz, spectrum, report))
}
