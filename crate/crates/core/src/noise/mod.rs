//! Parametric noise for density-matrix runs and the two mitigation steps:
//! readout-confusion inversion and linear zero-noise extrapolation.
//!
//! Noise is a two-wire depolarizing channel after every gate instance plus an
//! independent bit-flip confusion on every measured wire. Noise is amplified by
//! folding each gate `G` into `G (G^dagger G)^k`, which has `2k + 1` noisy
//! instances and the same ideal action.

mod estimator;

pub use estimator::SampledVqse;

use crate::dmera::{gate_fabric, Circuit};
use crate::qsim::{adjoint4, wire_mask, Mat4, MixedState};
use crate::{Error, Result, C64};

/// Column-stochastic `[[P(0|0), P(0|1)], [P(1|0), P(1|1)]]`, measured given true.
pub type Confusion = [[f64; 2]; 2];

pub fn symmetric_confusion(flip: f64) -> Confusion {
    [[1.0 - flip, flip], [flip, 1.0 - flip]]
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    pub depolarizing_p: f64,
    /// Symmetric flip probability applied to every measured wire.
    pub readout_p: f64,
    /// Odd folding factors used for extrapolation.
    pub scale_factors: Vec<u32>,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self { depolarizing_p: 0.01, readout_p: 0.02, scale_factors: vec![1, 3] }
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self { depolarizing_p: 0.0, readout_p: 0.0, scale_factors: vec![1, 3] }
    }

    pub fn validate(&self) -> Result<()> {
        for p in [self.depolarizing_p, self.readout_p] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        if self.readout_p == 0.5 {
            return Err(Error::SingularConfusion(0));
        }
        for &s in &self.scale_factors {
            check_scale(s)?;
        }
        if self.scale_factors.is_empty() {
            return Err(Error::InsufficientScales);
        }
        Ok(())
    }

    pub fn confusions(&self, num_wires: usize) -> Vec<Confusion> {
        vec![symmetric_confusion(self.readout_p); num_wires]
    }
}

fn check_scale(scale: u32) -> Result<()> {
    if scale == 0 || scale % 2 == 0 {
        return Err(Error::InvalidScale(scale));
    }
    Ok(())
}

/// `rho <- (1 - p) rho + p Tr_pair(rho) (x) I/4` on `wires`.
pub fn apply_depolarizing(rho: &mut MixedState, wires: (usize, usize), p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let n = rho.num_wires();
    for w in [wires.0, wires.1] {
        if w >= n {
            return Err(Error::WireOutOfRange { wire: w, num_wires: n });
        }
    }
    if wires.0 == wires.1 {
        return Err(Error::RepeatedWire(wires.0));
    }
    depolarize_unchecked(rho, wires, p);
    Ok(())
}

fn depolarize_unchecked(rho: &mut MixedState, (a, b): (usize, usize), p: f64) {
    if p == 0.0 {
        return;
    }
    let n = rho.num_wires();
    let d = rho.dim();
    let (ma, mb) = (wire_mask(n, a), wire_mask(n, b));
    let both = ma | mb;
    let pair = [0, mb, ma, ma | mb];
    let m = rho.matrix_mut();
    for e in (0..d).filter(|e| e & both == 0) {
        for f in (0..d).filter(|f| f & both == 0) {
            let traced: C64 = pair.iter().map(|&z| m[(e | z) * d + (f | z)]).sum();
            for &x in &pair {
                for &y in &pair {
                    let idx = (e | x) * d + (f | y);
                    m[idx] *= 1.0 - p;
                    if x == y {
                        m[idx] += traced * (p / 4.0);
                    }
                }
            }
        }
    }
}

/// Applies `u` on `wires` folded to `scale` instances, each followed by the
/// depolarizing channel.
pub fn apply_noisy_gate(rho: &mut MixedState, wires: (usize, usize), u: &Mat4, p: f64, scale: u32) -> Result<()> {
    check_scale(scale)?;
    let ud = adjoint4(u);
    rho.apply_unchecked(wires, u);
    depolarize_unchecked(rho, wires, p);
    for _ in 0..(scale - 1) / 2 {
        rho.apply_unchecked(wires, &ud);
        depolarize_unchecked(rho, wires, p);
        rho.apply_unchecked(wires, u);
        depolarize_unchecked(rho, wires, p);
    }
    Ok(())
}

/// Density matrix of `circuit` with every gate folded to `scale` and
/// depolarized after each instance.
pub fn noisy_simulate(circuit: &Circuit, model: &NoiseModel, scale: u32) -> Result<MixedState> {
    check_scale(scale)?;
    if !(0.0..=1.0).contains(&model.depolarizing_p) {
        return Err(Error::InvalidProbability(model.depolarizing_p));
    }
    let mut rho = MixedState::from_pure(&circuit.initial_state());
    for g in &circuit.gates {
        apply_noisy_gate(&mut rho, g.wires, &gate_fabric(g.params), model.depolarizing_p, scale)?;
    }
    Ok(rho)
}

fn check_confusions(confusion: &[Confusion], len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let n = len.trailing_zeros() as usize;
    if confusion.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: confusion.len() });
    }
    for (w, c) in confusion.iter().enumerate() {
        let ok = c.iter().flatten().all(|x| (0.0..=1.0).contains(x))
            && (c[0][0] + c[1][0] - 1.0).abs() < 1e-12
            && (c[0][1] + c[1][1] - 1.0).abs() < 1e-12;
        if !ok {
            return Err(Error::NotStochastic(w));
        }
    }
    Ok(n)
}

/// Applies a 2x2 matrix to one wire of a vector over `n` wires.
fn apply_on_wire(v: &mut [f64], n: usize, wire: usize, m: &[[f64; 2]; 2]) {
    let mask = wire_mask(n, wire);
    for i in (0..v.len()).filter(|i| i & mask == 0) {
        let (x0, x1) = (v[i], v[i | mask]);
        v[i] = m[0][0] * x0 + m[0][1] * x1;
        v[i | mask] = m[1][0] * x0 + m[1][1] * x1;
    }
}

/// Distribution seen through independent per-wire confusion (wire 0 first).
pub fn apply_readout_noise(probs: &[f64], confusion: &[Confusion]) -> Result<Vec<f64>> {
    let n = check_confusions(confusion, probs.len())?;
    if let Some(&neg) = probs.iter().find(|&&p| p < 0.0) {
        return Err(Error::NegativeProbability(neg));
    }
    let mut v = probs.to_vec();
    for (w, c) in confusion.iter().enumerate() {
        apply_on_wire(&mut v, n, w, c);
    }
    Ok(v)
}

/// Inverts the per-wire confusion, then clamps negatives and renormalizes.
pub fn mitigate_readout(observed: &[f64], confusion: &[Confusion]) -> Result<Vec<f64>> {
    let n = check_confusions(confusion, observed.len())?;
    let mut v = observed.to_vec();
    for (w, c) in confusion.iter().enumerate() {
        let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
        if det.abs() < 1e-12 {
            return Err(Error::SingularConfusion(w));
        }
        let inv = [[c[1][1] / det, -c[0][1] / det], [-c[1][0] / det, c[0][0] / det]];
        apply_on_wire(&mut v, n, w, &inv);
    }
    clamp_renormalize(&mut v)?;
    Ok(v)
}

/// Negative entries go to zero and the rest is rescaled to sum to one.
pub fn clamp_renormalize(v: &mut [f64]) -> Result<()> {
    v.iter_mut().for_each(|x| *x = x.max(0.0));
    let total: f64 = v.iter().sum();
    if !(total > 0.0) {
        return Err(Error::AllZero);
    }
    v.iter_mut().for_each(|x| *x /= total);
    Ok(())
}

/// Intercept at zero of the least-squares line through `(scale, value)`.
pub fn zne_extrapolate(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InsufficientScales);
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx < 1e-24 {
        return Err(Error::InsufficientScales);
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(my - sxy / sxx * mx)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MitigatedExpectation {
    pub raw: Vec<(f64, f64)>,
    pub extrapolated: f64,
}

impl MitigatedExpectation {
    pub fn from_points(raw: Vec<(f64, f64)>) -> Result<Self> {
        let extrapolated = zne_extrapolate(&raw)?;
        Ok(Self { raw, extrapolated })
    }
}
