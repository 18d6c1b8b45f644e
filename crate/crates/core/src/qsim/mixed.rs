use super::{apply4, quad, split_offsets, validate_keep, wire_mask, GateApplication, Mat4, PureState};
use crate::{Error, Result, C64};

/// Density matrix over `num_wires` qubits, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedState {
    num_wires: usize,
    rho: Vec<C64>,
}

impl MixedState {
    pub(crate) fn from_raw(num_wires: usize, rho: Vec<C64>) -> Self {
        debug_assert_eq!(rho.len(), 1 << (2 * num_wires));
        Self { num_wires, rho }
    }

    /// Validates a row-major `dim x dim` matrix: power-of-two dimension,
    /// Hermitian and unit trace within 1e-10.
    pub fn from_matrix(dim: usize, rho: Vec<C64>) -> Result<Self> {
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        if rho.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: rho.len() });
        }
        let s = Self { num_wires: dim.trailing_zeros() as usize, rho };
        let defect = s.hermiticity_defect();
        if defect > 1e-10 {
            return Err(Error::NotHermitian(defect));
        }
        let tr = s.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(tr));
        }
        Ok(s)
    }

    /// Diagonal density matrix from a probability list.
    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        let dim = probs.len();
        let mut rho = vec![C64::new(0.0, 0.0); dim * dim];
        for (i, p) in probs.iter().enumerate() {
            rho[i * dim + i] = C64::new(*p, 0.0);
        }
        Self::from_matrix(dim, rho)
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let a = psi.amplitudes();
        let dim = a.len();
        let mut rho = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                rho[i * dim + j] = a[i] * a[j].conj();
            }
        }
        Self { num_wires: psi.num_wires(), rho }
    }

    pub fn maximally_mixed(num_wires: usize) -> Self {
        let dim = 1 << num_wires;
        let mut rho = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            rho[i * dim + i] = C64::new(1.0 / dim as f64, 0.0);
        }
        Self { num_wires, rho }
    }

    pub fn num_wires(&self) -> usize {
        self.num_wires
    }

    pub fn dim(&self) -> usize {
        1 << self.num_wires
    }

    /// Row-major entries.
    pub fn matrix(&self) -> &[C64] {
        &self.rho
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut [C64] {
        &mut self.rho
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.rho[i * self.dim() + j]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| self.rho[i * d + i].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn purity(&self) -> f64 {
        // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.rho.iter().map(|x| x.norm_sqr()).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.rho[i * d + j] - self.rho[j * d + i].conj()).norm());
            }
        }
        worst
    }

    /// `rho <- U rho U^dagger`.
    pub fn apply(&mut self, gate: &GateApplication) -> Result<()> {
        gate.check_wires(self.num_wires)?;
        self.apply_unchecked(gate.wires, &gate.unitary);
        Ok(())
    }

    pub(crate) fn apply_unchecked(&mut self, (a, b): (usize, usize), m: &Mat4) {
        let n = self.num_wires;
        let d = self.dim();
        let ma = wire_mask(n, a);
        let mb = wire_mask(n, b);
        let both = ma | mb;
        let mut mc = *m;
        mc.iter_mut().flatten().for_each(|x| *x = x.conj());
        // U acting on the row index of every column
        for col in 0..d {
            for base in 0..d {
                if base & both != 0 {
                    continue;
                }
                let idx = quad(base, ma, mb);
                let v = apply4(m, idx.map(|r| self.rho[r * d + col]));
                for (r, x) in idx.into_iter().zip(v) {
                    self.rho[r * d + col] = x;
                }
            }
        }
        // conj(U) acting on the column index of every row gives rho U^dagger
        for row in 0..d {
            let line = &mut self.rho[row * d..(row + 1) * d];
            for base in 0..d {
                if base & both != 0 {
                    continue;
                }
                let idx = quad(base, ma, mb);
                let v = apply4(&mc, idx.map(|c| line[c]));
                for (c, x) in idx.into_iter().zip(v) {
                    line[c] = x;
                }
            }
        }
    }

    /// Reduced density matrix on `keep`, ordered as given.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<MixedState> {
        validate_keep(keep, self.num_wires)?;
        let (koff, eoff) = split_offsets(keep, self.num_wires);
        let d = self.dim();
        let dk = koff.len();
        let mut out = vec![C64::new(0.0, 0.0); dk * dk];
        for (i, &ki) in koff.iter().enumerate() {
            for (j, &kj) in koff.iter().enumerate() {
                out[i * dk + j] = eoff.iter().map(|&e| self.rho[(ki | e) * d + (kj | e)]).sum();
            }
        }
        Ok(MixedState::from_raw(keep.len(), out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{kron2, von_neumann_entropy};

    fn hadamard_pair() -> Mat4 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = [[C64::new(s, 0.0), C64::new(s, 0.0)], [C64::new(s, 0.0), C64::new(-s, 0.0)]];
        kron2(&h, &h)
    }

    #[test]
    fn mixed_matches_pure_backend() {
        let mut psi = PureState::from_bits(&[0, 1, 1]);
        let mut rho = MixedState::from_pure(&psi);
        let g = GateApplication::new((2, 0), hadamard_pair()).unwrap();
        psi.apply(&g).unwrap();
        rho.apply(&g).unwrap();
        let want = MixedState::from_pure(&psi);
        for (x, y) in rho.matrix().iter().zip(want.matrix()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn trace_out_everything_but_one_of_maximally_mixed() {
        let r = MixedState::maximally_mixed(3).partial_trace(&[1]).unwrap();
        assert!((von_neumann_entropy(&r) - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        let bad = vec![C64::new(0.5, 0.0), C64::new(0.0, 1.0), C64::new(0.0, 1.0), C64::new(0.5, 0.0)];
        assert!(matches!(MixedState::from_matrix(2, bad), Err(Error::NotHermitian(_))));
        assert!(matches!(MixedState::from_diagonal(&[0.5, 0.6]), Err(Error::NotNormalized(_))));
        assert!(matches!(MixedState::from_diagonal(&[0.5, 0.2, 0.3]), Err(Error::NotPowerOfTwo(3))));
    }

    #[test]
    fn purity_of_pure_and_mixed() {
        assert!((MixedState::from_pure(&PureState::zero(2)).purity() - 1.0).abs() < 1e-15);
        assert!((MixedState::maximally_mixed(2).purity() - 0.25).abs() < 1e-15);
    }
}
