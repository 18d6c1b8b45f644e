use super::{apply4, quad, split_offsets, validate_keep, wire_mask, GateApplication, Mat4, MixedState};
use crate::{Error, Result, C64};

/// Normalized statevector over `num_wires` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    num_wires: usize,
    amps: Vec<C64>,
}

impl PureState {
    /// `|0...0>`.
    pub fn zero(num_wires: usize) -> Self {
        Self::basis(num_wires, 0)
    }

    /// The computational basis state with the given index.
    pub fn basis(num_wires: usize, index: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << num_wires];
        amps[index] = C64::new(1.0, 0.0);
        Self { num_wires, amps }
    }

    /// Product state from one bit per wire (wire 0 first).
    pub fn from_bits(bits: &[u8]) -> Self {
        let n = bits.len();
        let index = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .fold(0, |acc, (w, _)| acc | wire_mask(n, w));
        Self::basis(n, index)
    }

    /// Wraps an amplitude vector, which must have power-of-two length and unit
    /// norm within 1e-10.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm.sqrt()));
        }
        Ok(Self { num_wires: len.trailing_zeros() as usize, amps })
    }

    /// Rescales an arbitrary nonzero vector to unit norm.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(amps)
    }

    pub fn num_wires(&self) -> usize {
        self.num_wires
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply(&mut self, gate: &GateApplication) -> Result<()> {
        gate.check_wires(self.num_wires)?;
        self.apply_unchecked(gate.wires, &gate.unitary);
        Ok(())
    }

    /// Applies `m` on `(a, b)` without validating; callers own the checks.
    pub(crate) fn apply_unchecked(&mut self, (a, b): (usize, usize), m: &Mat4) {
        let ma = wire_mask(self.num_wires, a);
        let mb = wire_mask(self.num_wires, b);
        let both = ma | mb;
        for base in 0..self.amps.len() {
            if base & both != 0 {
                continue;
            }
            let idx = quad(base, ma, mb);
            let v = apply4(m, idx.map(|i| self.amps[i]));
            for (i, x) in idx.into_iter().zip(v) {
                self.amps[i] = x;
            }
        }
    }

    /// `<Z ... Z>` over every wire.
    pub fn parity(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| if i.count_ones() % 2 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum()
    }

    /// Reduced density matrix on `keep`, ordered as given.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<MixedState> {
        validate_keep(keep, self.num_wires)?;
        let (koff, eoff) = split_offsets(keep, self.num_wires);
        let dk = koff.len();
        // psi as a dk x de matrix, then rho = psi psi^dagger
        let rows: Vec<Vec<C64>> =
            koff.iter().map(|&k| eoff.iter().map(|&e| self.amps[k | e]).collect()).collect();
        let mut rho = vec![C64::new(0.0, 0.0); dk * dk];
        for i in 0..dk {
            for j in i..dk {
                let v: C64 = rows[i].iter().zip(&rows[j]).map(|(x, y)| x * y.conj()).sum();
                rho[i * dk + j] = v;
                rho[j * dk + i] = v.conj();
            }
        }
        Ok(MixedState::from_raw(keep.len(), rho))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::identity4;

    fn bell() -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::from_amplitudes(vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)])
            .unwrap()
    }

    #[test]
    fn from_bits_uses_msb_first() {
        let s = PureState::from_bits(&[0, 1]);
        assert_eq!(s.amplitudes()[1], C64::new(1.0, 0.0));
        let s = PureState::from_bits(&[1, 0, 0]);
        assert_eq!(s.amplitudes()[4], C64::new(1.0, 0.0));
    }

    #[test]
    fn identity_gate_leaves_state() {
        let mut s = bell();
        let before = s.clone();
        s.apply(&GateApplication::new((1, 0), identity4()).unwrap()).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn out_of_range_wire() {
        let mut s = PureState::zero(2);
        let g = GateApplication::new((0, 2), identity4()).unwrap();
        assert_eq!(s.apply(&g), Err(Error::WireOutOfRange { wire: 2, num_wires: 2 }));
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let r = bell().partial_trace(&[0]).unwrap();
        let m = r.matrix();
        assert!((m[0].re - 0.5).abs() < 1e-15 && (m[3].re - 0.5).abs() < 1e-15);
        assert!(m[1].norm() < 1e-15);
    }

    #[test]
    fn product_marginal() {
        let r = PureState::from_bits(&[0, 1]).partial_trace(&[0]).unwrap();
        assert_eq!(r.matrix()[0], C64::new(1.0, 0.0));
        let r = PureState::from_bits(&[0, 1]).partial_trace(&[1]).unwrap();
        assert_eq!(r.matrix()[3], C64::new(1.0, 0.0));
    }

    #[test]
    fn ghz_two_wire_marginal() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![C64::new(0.0, 0.0); 8];
        amps[0] = C64::new(s, 0.0);
        amps[7] = C64::new(s, 0.0);
        let r = PureState::from_amplitudes(amps).unwrap().partial_trace(&[0, 1]).unwrap();
        let d = r.diagonal();
        for (x, want) in d.iter().zip([0.5, 0.0, 0.0, 0.5]) {
            assert!((x - want).abs() < 1e-15);
        }
        assert!(r.matrix()[3].norm() < 1e-15);
    }

    #[test]
    fn keep_validation() {
        let s = bell();
        assert_eq!(s.partial_trace(&[]), Err(Error::EmptyKeep));
        assert_eq!(s.partial_trace(&[1, 1]), Err(Error::DuplicateWire(1)));
    }

    #[test]
    fn rejects_bad_vectors() {
        assert_eq!(PureState::from_amplitudes(vec![C64::new(1.0, 0.0); 3]), Err(Error::NotPowerOfTwo(3)));
        assert!(matches!(
            PureState::from_amplitudes(vec![C64::new(1.0, 0.0); 2]),
            Err(Error::NotNormalized(_))
        ));
    }
}
