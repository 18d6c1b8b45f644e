use nalgebra::DMatrix;

use super::MixedState;
use crate::{Error, Result, C64};

/// Eigenvalues at or below this are dropped before taking logarithms.
pub const EIGEN_CUTOFF: f64 = 1e-12;

/// Eigenvalues of a Hermitian row-major matrix, sorted descending. Real
/// matrices take the cheaper real symmetric path.
pub(crate) fn eigenvalues_raw(dim: usize, m: &[C64]) -> Vec<f64> {
    let mut vals: Vec<f64> = if m.iter().all(|x| x.im == 0.0) {
        DMatrix::from_row_iterator(dim, dim, m.iter().map(|x| x.re))
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect()
    } else {
        DMatrix::from_row_slice(dim, dim, m).symmetric_eigenvalues().iter().copied().collect()
    };
    vals.sort_by(|a, b| b.total_cmp(a));
    vals
}

/// Spectrum of `rho`, descending.
pub fn hermitian_eigenvalues(rho: &MixedState) -> Vec<f64> {
    eigenvalues_raw(rho.dim(), rho.matrix())
}

fn shannon(lambdas: impl Iterator<Item = f64>) -> f64 {
    lambdas.filter(|&l| l > EIGEN_CUTOFF).map(|l| -l * l.ln()).sum()
}

/// `-Tr rho ln rho` in nats.
pub fn von_neumann_entropy(rho: &MixedState) -> f64 {
    shannon(hermitian_eigenvalues(rho).into_iter()).max(0.0)
}

/// Shannon entropy in nats of a nonnegative list, normalized first.
pub fn entropy_from_probabilities(lambdas: &[f64]) -> Result<f64> {
    if let Some(&neg) = lambdas.iter().find(|&&l| l < 0.0) {
        return Err(Error::NegativeProbability(neg));
    }
    let total: f64 = lambdas.iter().sum();
    if total <= 0.0 {
        return Err(Error::AllZero);
    }
    Ok(shannon(lambdas.iter().map(|l| l / total)).max(0.0))
}

/// `1/2 ||a - b||_1`.
pub fn trace_distance(a: &MixedState, b: &MixedState) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let diff: Vec<C64> = a.matrix().iter().zip(b.matrix()).map(|(x, y)| x - y).collect();
    Ok(0.5 * eigenvalues_raw(a.dim(), &diff).iter().map(|l| l.abs()).sum::<f64>())
}

/// Real diagonal of `rho` in basis order.
pub fn diagonal_probabilities(rho: &MixedState) -> Vec<f64> {
    rho.diagonal()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{kron2, GateApplication, PureState};
    use std::f64::consts::LN_2;

    #[test]
    fn entropy_examples() {
        let pure = MixedState::from_pure(&PureState::from_bits(&[1, 0]));
        assert!(von_neumann_entropy(&pure).abs() < 1e-12);
        let half = MixedState::from_diagonal(&[0.5, 0.5]).unwrap();
        assert!((von_neumann_entropy(&half) - LN_2).abs() < 1e-12);
        let r = MixedState::from_diagonal(&[0.75, 0.25]).unwrap();
        let oracle = -(0.75f64 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
        assert!((von_neumann_entropy(&r) - oracle).abs() < 1e-12);
        assert!((oracle - 0.562335).abs() < 1e-6);
    }

    #[test]
    fn probability_entropy() {
        assert_eq!(entropy_from_probabilities(&[1.0, 0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!((entropy_from_probabilities(&[0.25; 4]).unwrap() - 4f64.ln()).abs() < 1e-12);
        let h = entropy_from_probabilities(&[0.5, 0.3, 0.2]).unwrap();
        assert!((h - 1.029653).abs() < 1e-6);
        assert_eq!(entropy_from_probabilities(&[0.0, 0.0]), Err(Error::AllZero));
        assert_eq!(entropy_from_probabilities(&[1.5, -0.5]), Err(Error::NegativeProbability(-0.5)));
    }

    #[test]
    fn distance_examples() {
        let a = MixedState::from_diagonal(&[1.0, 0.0]).unwrap();
        let b = MixedState::from_diagonal(&[0.5, 0.5]).unwrap();
        let c = MixedState::from_diagonal(&[0.0, 1.0]).unwrap();
        assert!(trace_distance(&a, &a).unwrap().abs() < 1e-15);
        assert!((trace_distance(&a, &b).unwrap() - 0.5).abs() < 1e-15);
        assert!((trace_distance(&a, &c).unwrap() - 1.0).abs() < 1e-15);
        let big = MixedState::maximally_mixed(2);
        assert!(matches!(trace_distance(&a, &big), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(diagonal_probabilities(&MixedState::maximally_mixed(2)), vec![0.25; 4]);
        let one = MixedState::from_pure(&PureState::from_bits(&[1, 1]));
        assert_eq!(diagonal_probabilities(&one), vec![0.0, 0.0, 0.0, 1.0]);

        // 1/2 |00><00| + 1/2 |++><++|
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = [[C64::new(s, 0.0), C64::new(s, 0.0)], [C64::new(s, 0.0), C64::new(-s, 0.0)]];
        let mut plus = PureState::zero(2);
        plus.apply(&GateApplication::new((0, 1), kron2(&h, &h)).unwrap()).unwrap();
        let zero = MixedState::from_pure(&PureState::zero(2));
        let pp = MixedState::from_pure(&plus);
        let mix: Vec<C64> = zero.matrix().iter().zip(pp.matrix()).map(|(x, y)| (x + y) * 0.5).collect();
        let rho = MixedState::from_matrix(4, mix).unwrap();
        for (x, want) in diagonal_probabilities(&rho).iter().zip([0.625, 0.125, 0.125, 0.125]) {
            assert!((x - want).abs() < 1e-15);
        }
    }
}
