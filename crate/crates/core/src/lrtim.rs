//! Long-range transverse-field Ising chain and its exact ground state.
//!
//! ```text
//! H = h sum_i S^z_i - J sum_{i<j} |j - i|^(-alpha) S^x_i S^x_j
//! ```
//! on an open chain with every pair coupled. `S = sigma / 2` by default;
//! [`SpinConvention::Pauli`] drops the factors of one half.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::dmera::SubsystemSpec;
use crate::qsim::{von_neumann_entropy, wire_mask, PureState};
use crate::{Error, Result, C64};

/// Largest chain accepted by the dense builder.
pub const MAX_DENSE_SPINS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SpinConvention {
    /// Spin one half, `S = sigma / 2`.
    #[default]
    HalfSpin,
    /// Bare Pauli matrices.
    Pauli,
}

impl SpinConvention {
    fn scale(self) -> f64 {
        match self {
            SpinConvention::HalfSpin => 0.5,
            SpinConvention::Pauli => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LrtimParams {
    pub num_spins: usize,
    pub h: f64,
    pub j: f64,
    pub alpha: f64,
    pub spin: SpinConvention,
}

impl LrtimParams {
    pub fn new(num_spins: usize, h: f64, alpha: f64) -> Self {
        Self { num_spins, h, j: 1.0, alpha, spin: SpinConvention::HalfSpin }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_spins < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 spins, got {}", self.num_spins)));
        }
        if self.num_spins > MAX_DENSE_SPINS {
            return Err(Error::TooLarge(self.num_spins));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !self.h.is_finite() || !self.j.is_finite() {
            return Err(Error::InvalidParameter("field and coupling must be finite".into()));
        }
        Ok(())
    }

    /// Coupling weight `J |j - i|^(-alpha)` between two sites.
    pub fn coupling(&self, i: usize, k: usize) -> f64 {
        self.j * (i.abs_diff(k) as f64).powf(-self.alpha)
    }
}

/// Dense Hermitian matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<C64>,
}

impl DenseOperator {
    pub fn from_matrix(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: data.len() });
        }
        let op = Self { dim, data };
        let scale = op.data.iter().map(|x| x.norm()).fold(1.0, f64::max);
        let defect = op.hermiticity_defect();
        if defect > 1e-12 * scale {
            return Err(Error::NotHermitian(defect));
        }
        Ok(op)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let dim = diag.len();
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        for (i, d) in diag.iter().enumerate() {
            data[i * dim + i] = C64::new(*d, 0.0);
        }
        Self::from_matrix(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_wires(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    fn hermiticity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.data[i * d + j] - self.data[j * d + i].conj()).norm());
            }
        }
        worst
    }

    /// `H v`.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(self
            .data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `<psi|H|psi>`.
    pub fn expectation(&self, psi: &PureState) -> Result<f64> {
        let hv = self.apply(psi.amplitudes())?;
        Ok(psi.amplitudes().iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum())
    }

    /// Largest entry of `[H, Z...Z]`.
    pub fn parity_commutator_norm(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                let zi = if i.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                let zj = if j.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                worst = worst.max((self.data[i * d + j] * (zj - zi)).norm());
            }
        }
        worst
    }
}

pub fn lrtim_hamiltonian(p: &LrtimParams) -> Result<DenseOperator> {
    p.validate()?;
    let n = p.num_spins;
    let dim = 1usize << n;
    let s = p.spin.scale();
    let mut data = vec![C64::new(0.0, 0.0); dim * dim];
    for b in 0..dim {
        let field: f64 = (0..n).map(|w| if b & wire_mask(n, w) == 0 { 1.0 } else { -1.0 }).sum();
        data[b * dim + b] += C64::new(p.h * s * field, 0.0);
        for i in 0..n {
            for k in i + 1..n {
                let flipped = b ^ wire_mask(n, i) ^ wire_mask(n, k);
                data[flipped * dim + b] -= C64::new(p.coupling(i, k) * s * s, 0.0);
            }
        }
    }
    DenseOperator::from_matrix(dim, data)
}

/// Ground states closer than this in energy count as degenerate.
const DEGENERACY_TOL: f64 = 1e-10;

/// Lowest eigenpair. A degenerate ground space is resolved to its even
/// Z-parity member; the largest amplitude (lowest index on ties) is made real
/// and positive.
pub fn exact_ground_state(h: &DenseOperator) -> Result<(f64, PureState)> {
    let d = h.dim;
    let (values, vectors): (Vec<f64>, Vec<Vec<C64>>) = if h.data.iter().all(|x| x.im == 0.0) {
        let eig = SymmetricEigen::new(DMatrix::from_row_iterator(d, d, h.data.iter().map(|x| x.re)));
        let vecs = (0..d).map(|k| eig.eigenvectors.column(k).iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        (eig.eigenvalues.iter().copied().collect(), vecs)
    } else {
        let eig = SymmetricEigen::new(DMatrix::from_row_slice(d, d, &h.data));
        let vecs = (0..d).map(|k| eig.eigenvectors.column(k).iter().copied().collect()).collect();
        (eig.eigenvalues.iter().copied().collect(), vecs)
    };
    let e0 = values.iter().copied().fold(f64::INFINITY, f64::min);
    let ground: Vec<&Vec<C64>> =
        values.iter().zip(&vectors).filter(|(e, _)| **e - e0 <= DEGENERACY_TOL).map(|(_, v)| v).collect();

    let mut best = ground[0].clone();
    if ground.len() > 1 {
        let even = |v: &Vec<C64>| -> Vec<C64> {
            v.iter().enumerate().map(|(i, a)| if i.count_ones() % 2 == 0 { *a } else { C64::new(0.0, 0.0) }).collect()
        };
        let projected: Vec<Vec<C64>> = ground.iter().map(|v| even(v)).collect();
        let norms: Vec<f64> = projected.iter().map(|v| v.iter().map(|a| a.norm_sqr()).sum()).collect();
        let (k, &nrm) = norms.iter().enumerate().fold((0, &norms[0]), |acc, x| if *x.1 > *acc.1 + 1e-12 { x } else { acc });
        if nrm > 1e-12 {
            best = projected[k].clone();
        }
    }
    let peak = best.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let anchor = best.iter().position(|a| a.norm() >= peak - 1e-12).unwrap_or(0);
    let phase = best[anchor].conj() / best[anchor].norm();
    best.iter_mut().for_each(|a| *a *= phase);
    Ok((e0, PureState::normalized(best)?))
}

/// Entanglement entropy of a block of `state`.
pub fn exact_subsystem_entropy(state: &PureState, sub: SubsystemSpec) -> Result<f64> {
    let wires = sub.wires(state.num_wires())?;
    Ok(von_neumann_entropy(&state.partial_trace(&wires)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmera::Side;

    #[test]
    fn two_spin_ground_energy() {
        let h = lrtim_hamiltonian(&LrtimParams::new(2, 1.0, 2.2)).unwrap();
        let (e, psi) = exact_ground_state(&h).unwrap();
        assert!((e + 17f64.sqrt() / 4.0).abs() < 1e-12);
        assert!((h.expectation(&psi).unwrap() - e).abs() < 1e-12);
    }

    #[test]
    fn field_only_limit() {
        let mut p = LrtimParams::new(4, 0.7, 2.2);
        p.j = 0.0;
        let (e, psi) = exact_ground_state(&lrtim_hamiltonian(&p).unwrap()).unwrap();
        assert!((e + 4.0 * 0.7 / 2.0).abs() < 1e-12);
        assert!((psi.amplitudes()[15].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coupling_weight() {
        let p = LrtimParams::new(4, 1.0, 2.2);
        assert!((p.coupling(0, 2) - 2f64.powf(-2.2)).abs() < 1e-15);
        assert!((p.coupling(0, 2) - 0.21764).abs() < 1e-5);
    }

    #[test]
    fn diagonal_operator() {
        let h = DenseOperator::from_real_diagonal(&[3.0, 1.0, 2.0, 5.0]).unwrap();
        let (e, psi) = exact_ground_state(&h).unwrap();
        assert!((e - 1.0).abs() < 1e-12);
        assert!((psi.amplitudes()[1].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_ground_space_prefers_even_parity() {
        // |01> (odd) and |11> (even) share the lowest energy
        let h = DenseOperator::from_real_diagonal(&[2.0, -1.0, 0.5, -1.0]).unwrap();
        let (_, psi) = exact_ground_state(&h).unwrap();
        assert!((psi.amplitudes()[3].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(0.0, 0.0)];
        assert!(matches!(DenseOperator::from_matrix(2, bad), Err(Error::NotHermitian(_))));
        assert_eq!(lrtim_hamiltonian(&LrtimParams::new(13, 1.0, 2.2)), Err(Error::TooLarge(13)));
        assert!(lrtim_hamiltonian(&LrtimParams::new(4, 1.0, 0.0)).is_err());
        assert!(lrtim_hamiltonian(&LrtimParams::new(1, 1.0, 2.0)).is_err());
    }

    #[test]
    fn parity_symmetry() {
        let h = lrtim_hamiltonian(&LrtimParams::new(6, 1.3, 2.2)).unwrap();
        assert!(h.parity_commutator_norm() < 1e-12);
    }

    #[test]
    fn entropy_of_simple_states() {
        let prod = PureState::from_bits(&[0, 1, 1, 0]);
        assert!(exact_subsystem_entropy(&prod, SubsystemSpec::new(Side::Left, 2).unwrap()).unwrap().abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell =
            PureState::from_amplitudes(vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)])
                .unwrap();
        let e = exact_subsystem_entropy(&bell, SubsystemSpec::new(Side::Left, 1).unwrap()).unwrap();
        assert!((e - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn pauli_convention_scales_energy() {
        let mut p = LrtimParams::new(2, 1.0, 2.2);
        p.spin = SpinConvention::Pauli;
        let (e, _) = exact_ground_state(&lrtim_hamiltonian(&p).unwrap()).unwrap();
        // H = (Z1 + Z2) - X1 X2 in the even block: [[2, -1], [-1, -2]]
        assert!((e + 5f64.sqrt()).abs() < 1e-12);
    }
}
