//! Shot-based VQSE under the parametric noise model.

use std::cell::Cell;

use super::{apply_noisy_gate, clamp_renormalize, mitigate_readout, noisy_simulate, zne_extrapolate, apply_readout_noise, Confusion, NoiseModel};
use crate::dmera::{gate_fabric, ConeCircuit, GateFabricParams};
use crate::qsim::{sample_probabilities, MixedState};
use crate::variational::{diagonalizer_bonds, spectrum_from_values, Objective, SpectrumEstimate, VqseCost};
use crate::Result;

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Noisy cone states with a trainable diagonalizer, read out with a finite
/// number of shots per folding scale.
///
/// Gates outside the diagonalizer never touch the measured wires afterwards,
/// so the folded cone is simulated once per scale and traced down to the
/// outputs before any diagonalizer is applied.
pub struct SampledVqse {
    prepared: Vec<(u32, MixedState)>,
    bonds: Vec<(usize, usize)>,
    model: NoiseModel,
    confusion: Vec<Confusion>,
    cost: VqseCost,
    shots: u64,
    mitigate: bool,
    seed: u64,
    draws: Cell<u64>,
}

impl SampledVqse {
    pub fn new(cone: &ConeCircuit, model: &NoiseModel, cost: VqseCost, shots: u64, seed: u64) -> Result<Self> {
        model.validate()?;
        let m = cone.output_map.len();
        let prepared = model
            .scale_factors
            .iter()
            .map(|&s| Ok((s, noisy_simulate(&cone.circuit, model, s)?.partial_trace(&cone.output_map)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            prepared,
            bonds: diagonalizer_bonds(m)?,
            model: model.clone(),
            confusion: model.confusions(m),
            cost,
            shots,
            mitigate: true,
            seed,
            draws: Cell::new(0),
        })
    }

    /// Whether losses use the mitigated or the raw unit-scale estimate.
    pub fn set_mitigation(&mut self, on: bool) {
        self.mitigate = on;
    }

    fn next_seed(&self) -> u64 {
        let k = self.draws.get();
        self.draws.set(k + 1);
        splitmix(self.seed ^ splitmix(k))
    }

    /// Exact noisy diagonal (infinite shots, before readout) at one scale.
    pub fn exact_diagonal(&self, angles: &[GateFabricParams], scale_index: usize) -> Result<Vec<f64>> {
        let (s, rho) = &self.prepared[scale_index];
        let mut r = rho.clone();
        for (&w, &p) in self.bonds.iter().zip(angles) {
            apply_noisy_gate(&mut r, w, &gate_fabric(p), self.model.depolarizing_p, *s)?;
        }
        Ok(r.diagonal())
    }

    fn observed(&self, angles: &[GateFabricParams], scale_index: usize) -> Result<Vec<f64>> {
        let ideal = self.exact_diagonal(angles, scale_index)?;
        let seen = apply_readout_noise(&ideal.iter().map(|p| p.max(0.0)).collect::<Vec<_>>(), &self.confusion)?;
        Ok(sample_probabilities(&seen, self.shots, self.next_seed())?.frequencies())
    }

    /// Readout-mitigated frequencies per scale, extrapolated to zero noise per
    /// basis state, then clamped and renormalized.
    pub fn mitigated_diagonal(&self, angles: &[GateFabricParams]) -> Result<Vec<f64>> {
        let per_scale = (0..self.prepared.len())
            .map(|k| mitigate_readout(&self.observed(angles, k)?, &self.confusion))
            .collect::<Result<Vec<_>>>()?;
        let dim = per_scale[0].len();
        let mut out = if per_scale.len() == 1 {
            per_scale[0].clone()
        } else {
            (0..dim)
                .map(|i| {
                    let pts: Vec<(f64, f64)> =
                        self.prepared.iter().zip(&per_scale).map(|((s, _), v)| (*s as f64, v[i])).collect();
                    zne_extrapolate(&pts)
                })
                .collect::<Result<Vec<_>>>()?
        };
        clamp_renormalize(&mut out)?;
        Ok(out)
    }

    /// Frequencies at the first folding scale, no correction.
    pub fn raw_diagonal(&self, angles: &[GateFabricParams]) -> Result<Vec<f64>> {
        self.observed(angles, 0)
    }

    pub fn spectrum(&self, angles: &[GateFabricParams], mitigated: bool) -> Result<SpectrumEstimate> {
        let diag = if mitigated { self.mitigated_diagonal(angles)? } else { self.raw_diagonal(angles)? };
        let mut s = spectrum_from_values(&diag)?;
        s.loss = Some(self.cost.evaluate(&diag));
        Ok(s)
    }
}

impl Objective for SampledVqse {
    fn num_gates(&self) -> usize {
        self.bonds.len()
    }

    fn loss(&self, angles: &[GateFabricParams]) -> f64 {
        let diag = if self.mitigate { self.mitigated_diagonal(angles) } else { self.raw_diagonal(angles) };
        diag.map(|d| self.cost.evaluate(&d)).unwrap_or(f64::INFINITY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmera::{causal_cone, DmeraSpec, Layout, Side, SubsystemSpec};
    use crate::qsim::hermitian_eigenvalues;
    use crate::variational::{vqse_diagonalize, OptimizerConfig};

    fn cone() -> ConeCircuit {
        let spec = DmeraSpec::random(8, Layout::CALIBRATED, 5).unwrap();
        causal_cone(&spec, SubsystemSpec::new(Side::Right, 2).unwrap()).unwrap()
    }

    #[test]
    fn noiseless_many_shots_recovers_the_spectrum() {
        let c = cone();
        let rho = c.reduced_state();
        let cost = VqseCost::linear(2);
        let (ans, exact, _) = vqse_diagonalize(&rho, &cost, &OptimizerConfig::default()).unwrap();
        let est = SampledVqse::new(&c, &NoiseModel::noiseless(), cost, 1 << 20, 3).unwrap();
        let s = est.spectrum(ans.angles(), true).unwrap();
        assert!((s.entropy - exact.entropy).abs() < 5e-3);
        let eig = hermitian_eigenvalues(&rho);
        assert!(s.lambdas.iter().zip(&eig).all(|(a, b)| (a - b).abs() < 5e-3));
    }

    #[test]
    fn draws_are_reproducible() {
        let c = cone();
        let a = SampledVqse::new(&c, &NoiseModel::default(), VqseCost::linear(2), 1024, 9).unwrap();
        let b = SampledVqse::new(&c, &NoiseModel::default(), VqseCost::linear(2), 1024, 9).unwrap();
        let th = [GateFabricParams::new(0.2, 0.1)];
        assert_eq!(a.loss(&th), b.loss(&th));
        // successive calls draw fresh shots
        assert_ne!(a.raw_diagonal(&th).unwrap(), a.raw_diagonal(&th).unwrap());
    }

    #[test]
    fn exact_noisy_diagonal_is_a_distribution() {
        let c = cone();
        let est = SampledVqse::new(&c, &NoiseModel::default(), VqseCost::linear(2), 64, 0).unwrap();
        for k in 0..2 {
            let d = est.exact_diagonal(&[GateFabricParams::new(1.0, -0.5)], k).unwrap();
            assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
