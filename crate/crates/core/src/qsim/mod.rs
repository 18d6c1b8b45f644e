//! Dense statevector and density-matrix simulation.
//!
//! Both backends act with two-wire gates only; every circuit in this crate is
//! built from them. A gate's first wire is the more significant factor of its
//! 4x4 matrix, so `m[2a + b][2a' + b']` is the amplitude `<ab|U|a'b'>` with `a`
//! on `wires.0`.

mod measure;
mod mixed;
mod pure;
mod sample;

pub use measure::{
    diagonal_probabilities, entropy_from_probabilities, hermitian_eigenvalues, trace_distance,
    von_neumann_entropy, EIGEN_CUTOFF,
};
pub use mixed::MixedState;
pub use pure::PureState;
pub use sample::{sample_diagonal, sample_probabilities, Counts};

use crate::{Error, Result, C64};

/// Row-major 4x4 complex matrix.
pub type Mat4 = [[C64; 4]; 4];

const UNITARY_TOL: f64 = 1e-10;

pub fn identity4() -> Mat4 {
    let mut m = [[C64::new(0.0, 0.0); 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    m
}

pub fn matmul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn adjoint4(a: &Mat4) -> Mat4 {
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

/// Kronecker product of two single-wire operators, `a` on the first wire.
pub fn kron2(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> Mat4 {
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[i >> 1][j >> 1] * b[i & 1][j & 1];
        }
    }
    out
}

/// Largest entrywise deviation of `U^dagger U` from the identity.
pub fn unitarity_defect(m: &Mat4) -> f64 {
    let p = matmul4(&adjoint4(m), m);
    let id = identity4();
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((p[i][j] - id[i][j]).norm());
        }
    }
    worst
}

/// A 4x4 unitary bound to an ordered pair of wires.
#[derive(Clone, Debug, PartialEq)]
pub struct GateApplication {
    pub wires: (usize, usize),
    pub unitary: Mat4,
}

impl GateApplication {
    /// Checks unitarity and that the wires differ.
    pub fn new(wires: (usize, usize), unitary: Mat4) -> Result<Self> {
        if wires.0 == wires.1 {
            return Err(Error::RepeatedWire(wires.0));
        }
        let defect = unitarity_defect(&unitary);
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { wires, unitary })
    }

    pub fn adjoint(&self) -> Self {
        Self { wires: self.wires, unitary: adjoint4(&self.unitary) }
    }

    pub(crate) fn check_wires(&self, num_wires: usize) -> Result<()> {
        for w in [self.wires.0, self.wires.1] {
            if w >= num_wires {
                return Err(Error::WireOutOfRange { wire: w, num_wires });
            }
        }
        Ok(())
    }
}

/// Bit mask of `wire` in an `n`-wire basis index.
#[inline]
pub(crate) fn wire_mask(n: usize, wire: usize) -> usize {
    1 << (n - 1 - wire)
}

/// For each basis index with both target bits clear, the four indices
/// `|00>, |01>, |10>, |11>` on `(a, b)`.
#[inline]
pub(crate) fn quad(base: usize, ma: usize, mb: usize) -> [usize; 4] {
    [base, base | mb, base | ma, base | ma | mb]
}

#[inline]
pub(crate) fn apply4(m: &Mat4, v: [C64; 4]) -> [C64; 4] {
    let mut out = [C64::new(0.0, 0.0); 4];
    for (i, o) in out.iter_mut().enumerate() {
        *o = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2] + m[i][3] * v[3];
    }
    out
}

/// Checks that `keep` is nonempty, in range and free of duplicates.
pub(crate) fn validate_keep(keep: &[usize], num_wires: usize) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let mut seen = vec![false; num_wires];
    for &w in keep {
        if w >= num_wires {
            return Err(Error::WireOutOfRange { wire: w, num_wires });
        }
        if seen[w] {
            return Err(Error::DuplicateWire(w));
        }
        seen[w] = true;
    }
    Ok(())
}

/// Offsets for kept and traced-out index halves. `keep[0]` becomes the most
/// significant bit of the reduced index; traced wires keep their order.
pub(crate) fn split_offsets(keep: &[usize], num_wires: usize) -> (Vec<usize>, Vec<usize>) {
    let env: Vec<usize> = (0..num_wires).filter(|w| !keep.contains(w)).collect();
    let offsets = |wires: &[usize]| -> Vec<usize> {
        let k = wires.len();
        (0..1usize << k)
            .map(|idx| {
                let mut full = 0;
                for (pos, &w) in wires.iter().enumerate() {
                    if idx >> (k - 1 - pos) & 1 == 1 {
                        full |= wire_mask(num_wires, w);
                    }
                }
                full
            })
            .collect()
    };
    (offsets(keep), offsets(&env))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_orders_first_wire_as_high_bit() {
        let x = [[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]];
        let id = [[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
        let xi = kron2(&x, &id);
        // X on the first wire sends |00> (index 0) to |10> (index 2)
        assert_eq!(xi[2][0], C64::new(1.0, 0.0));
        assert_eq!(xi[1][0], C64::new(0.0, 0.0));
    }

    #[test]
    fn rejects_non_unitary_and_repeated_wires() {
        let mut m = identity4();
        m[0][0] = C64::new(2.0, 0.0);
        assert!(matches!(GateApplication::new((0, 1), m), Err(Error::NotUnitary(_))));
        assert_eq!(GateApplication::new((1, 1), identity4()), Err(Error::RepeatedWire(1)));
    }

    #[test]
    fn split_offsets_respects_keep_order() {
        let (k, e) = split_offsets(&[2, 0], 3);
        // reduced index 1 means wire 0 set: full index 4
        assert_eq!(k, vec![0, 4, 1, 5]);
        assert_eq!(e, vec![0, 2]);
    }
}
