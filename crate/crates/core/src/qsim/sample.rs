use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::MixedState;
use crate::{Error, Result};

/// Measurement record keyed by bitstring (wire 0 leftmost).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counts {
    num_wires: usize,
    counts: BTreeMap<String, u64>,
    total_shots: u64,
}

impl Counts {
    pub fn num_wires(&self) -> usize {
        self.num_wires
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    pub fn get(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Observed frequencies in basis-index order.
    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.total_shots as f64;
        (0..1usize << self.num_wires)
            .map(|i| self.get(&bitstring(i, self.num_wires)) as f64 / total)
            .collect()
    }
}

fn bitstring(index: usize, n: usize) -> String {
    (0..n).map(|w| if index >> (n - 1 - w) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Multinomial draw of `shots` outcomes from a probability list. Tiny negative
/// entries from round-off are treated as zero.
pub fn sample_probabilities(probs: &[f64], shots: u64, seed: u64) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let len = probs.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let weights: Vec<f64> = probs.iter().map(|p| p.max(0.0)).collect();
    let dist = WeightedIndex::new(&weights).map_err(|_| Error::AllZero)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = vec![0u64; len];
    for _ in 0..shots {
        tally[dist.sample(&mut rng)] += 1;
    }
    let n = len.trailing_zeros() as usize;
    let counts = tally
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(i, c)| (bitstring(i, n), c))
        .collect();
    Ok(Counts { num_wires: n, counts, total_shots: shots })
}

/// Samples the computational-basis diagonal of `rho`.
pub fn sample_diagonal(rho: &MixedState, shots: u64, seed: u64) -> Result<Counts> {
    sample_probabilities(&rho.diagonal(), shots, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::PureState;

    #[test]
    fn pure_basis_state_is_deterministic() {
        let rho = MixedState::from_pure(&PureState::zero(2));
        let c = sample_diagonal(&rho, 100, 7).unwrap();
        assert_eq!(c.get("00"), 100);
        assert_eq!(c.iter().count(), 1);
    }

    #[test]
    fn fair_coin_within_five_sigma() {
        let rho = MixedState::maximally_mixed(1);
        for seed in 0..20 {
            let c = sample_diagonal(&rho, 1024, seed).unwrap();
            assert_eq!(c.get("0") + c.get("1"), 1024);
            // binomial sigma = sqrt(1024 / 4) = 16
            assert!((c.get("0") as f64 - 512.0).abs() <= 5.0 * 16.0);
        }
    }

    #[test]
    fn same_seed_same_counts() {
        let rho = MixedState::maximally_mixed(3);
        assert_eq!(sample_diagonal(&rho, 500, 42).unwrap(), sample_diagonal(&rho, 500, 42).unwrap());
        assert_ne!(sample_diagonal(&rho, 500, 42).unwrap(), sample_diagonal(&rho, 500, 43).unwrap());
    }

    #[test]
    fn zero_shots_rejected() {
        assert_eq!(sample_diagonal(&MixedState::maximally_mixed(1), 0, 0), Err(Error::ZeroShots));
    }

    #[test]
    fn frequencies_in_index_order() {
        let c = sample_probabilities(&[0.0, 0.0, 1.0, 0.0], 10, 1).unwrap();
        assert_eq!(c.get("10"), 10);
        assert_eq!(c.frequencies(), vec![0.0, 0.0, 1.0, 0.0]);
    }
}
