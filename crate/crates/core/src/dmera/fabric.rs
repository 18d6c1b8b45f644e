//! The two-angle parity-preserving gate and its native decomposition.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::qsim::{kron2, matmul4, Mat4};
use crate::C64;

/// Angle pair of one gate. `theta0` rotates inside the odd-parity block
/// `{|01>, |10>}`, `theta1` inside the even block `{|00>, |11>}`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct GateFabricParams {
    pub theta0: f64,
    pub theta1: f64,
}

impl GateFabricParams {
    pub const fn new(theta0: f64, theta1: f64) -> Self {
        Self { theta0, theta1 }
    }

    /// The Rz angles `(phi0, phi1) = (theta1 - theta0, theta0 + theta1)`.
    pub fn phis(self) -> (f64, f64) {
        (self.theta1 - self.theta0, self.theta0 + self.theta1)
    }

    pub fn from_phis(phi0: f64, phi1: f64) -> Self {
        Self { theta0: 0.5 * (phi1 - phi0), theta1: 0.5 * (phi0 + phi1) }
    }

    /// Both angles wrapped into `[-pi, pi)`.
    pub fn canonical(self) -> Self {
        Self { theta0: wrap_angle(self.theta0), theta1: wrap_angle(self.theta1) }
    }
}

pub fn wrap_angle(x: f64) -> f64 {
    let y = x - 2.0 * PI * ((x + PI) / (2.0 * PI)).floor();
    // floor can land exactly on +pi after rounding
    if y >= PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Fixed input state of an ancilla wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ancilla {
    Zero,
    One,
}

impl Ancilla {
    pub fn bit(self) -> u8 {
        match self {
            Ancilla::Zero => 0,
            Ancilla::One => 1,
        }
    }

    pub fn from_bit(b: u8) -> Option<Self> {
        match b {
            0 => Some(Ancilla::Zero),
            1 => Some(Ancilla::One),
            _ => None,
        }
    }
}

/// ```text
/// [ c1  0   0  -s1 ]
/// [ 0   c0 -s0  0  ]
/// [ 0   s0  c0  0  ]
/// [ s1  0   0   c1 ]
/// ```
/// with `ck = cos(theta_k)`, `sk = sin(theta_k)`.
pub fn gate_fabric(p: GateFabricParams) -> Mat4 {
    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    let (s0, c0) = p.theta0.sin_cos();
    let (s1, c1) = p.theta1.sin_cos();
    [
        [r(c1), z, z, r(-s1)],
        [z, r(c0), r(-s0), z],
        [z, r(s0), r(c0), z],
        [r(s1), z, z, r(c1)],
    ]
}

/// 4x2 isometry `U |i, anc>` with the ancilla on the second (right) input.
pub fn isometry_right(p: GateFabricParams, ancilla: Ancilla) -> [[C64; 2]; 4] {
    let u = gate_fabric(p);
    let a = ancilla.bit() as usize;
    std::array::from_fn(|row| std::array::from_fn(|i| u[row][2 * i + a]))
}

/// 4x2 isometry `U |anc, i>` with the ancilla on the first (left) input.
pub fn isometry_left(p: GateFabricParams, ancilla: Ancilla) -> [[C64; 2]; 4] {
    let u = gate_fabric(p);
    let a = ancilla.bit() as usize;
    std::array::from_fn(|row| std::array::from_fn(|i| u[row][2 * a + i]))
}

/// Angles that turn a left-leg isometry into the same map with the ancilla fed
/// to the right leg: `isometry_right(swap_isometry_inputs(p, a), a) ==
/// isometry_left(p, a)`.
pub fn swap_isometry_inputs(p: GateFabricParams, ancilla: Ancilla) -> GateFabricParams {
    match ancilla {
        Ancilla::Zero => GateFabricParams::new(p.theta0 - FRAC_PI_2, p.theta1),
        Ancilla::One => GateFabricParams::new(p.theta0 + FRAC_PI_2, p.theta1),
    }
}

/// One native operation of a decomposed gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NativeOp {
    /// `exp(-i phi X X / 2)` on both wires.
    Rxx(f64),
    /// `Rz(first) (x) Rz(second)` with `Rz(phi) = exp(-i phi Z / 2)`.
    RzPair { first: f64, second: f64 },
}

impl NativeOp {
    pub fn unitary(self) -> Mat4 {
        let z = C64::new(0.0, 0.0);
        match self {
            NativeOp::Rxx(phi) => {
                let (s, c) = (0.5 * phi).sin_cos();
                let d = C64::new(c, 0.0);
                let o = C64::new(0.0, -s);
                [[d, z, z, o], [z, d, o, z], [z, o, d, z], [o, z, z, d]]
            }
            NativeOp::RzPair { first, second } => {
                let rz = |phi: f64| [[C64::from_polar(1.0, -0.5 * phi), z], [z, C64::from_polar(1.0, 0.5 * phi)]];
                kron2(&rz(first), &rz(second))
            }
        }
    }
}

/// `U(theta0, theta1) = Rxx(-pi/2) . (Rz(phi1) (x) Rz(phi0)) . Rxx(pi/2)` as an
/// operator product; `ops` lists the same factors in time order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateDecomposition {
    pub phi0: f64,
    pub phi1: f64,
    pub ops: [NativeOp; 3],
}

impl GateDecomposition {
    pub fn unitary(&self) -> Mat4 {
        self.ops.iter().fold(crate::qsim::identity4(), |acc, op| matmul4(&op.unitary(), &acc))
    }
}

pub fn decompose_gate(p: GateFabricParams) -> GateDecomposition {
    let (phi0, phi1) = p.phis();
    GateDecomposition {
        phi0,
        phi1,
        ops: [
            NativeOp::Rxx(FRAC_PI_2),
            NativeOp::RzPair { first: phi1, second: phi0 },
            NativeOp::Rxx(-FRAC_PI_2),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{adjoint4, identity4, unitarity_defect};

    fn max_dev(a: &Mat4, b: &Mat4) -> f64 {
        a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_angles_are_identity() {
        assert_eq!(gate_fabric(GateFabricParams::default()), identity4());
    }

    #[test]
    fn quarter_turns_move_single_excitations() {
        let u = gate_fabric(GateFabricParams::new(FRAC_PI_2, 0.0));
        // |01> (index 1) -> |10>, |10> (index 2) -> -|01>
        assert!((u[2][1] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((u[1][2] - C64::new(-1.0, 0.0)).norm() < 1e-15);
        let u = gate_fabric(GateFabricParams::new(0.0, FRAC_PI_2));
        assert!((u[3][0] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((u[0][3] - C64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phis_follow_sum_and_difference() {
        let d = decompose_gate(GateFabricParams::new(0.3, 0.7));
        assert!((d.phi0 - 0.4).abs() < 1e-15);
        assert!((d.phi1 - 1.0).abs() < 1e-15);
        let p = GateFabricParams::from_phis(d.phi0, d.phi1);
        assert!((p.theta0 - 0.3).abs() < 1e-15 && (p.theta1 - 0.7).abs() < 1e-15);
    }

    #[test]
    fn decomposition_matches_exactly() {
        for &(a, b) in &[(0.0, 0.0), (0.3, 0.7), (-2.0, 1.1), (3.0, -0.4)] {
            let p = GateFabricParams::new(a, b);
            let d = decompose_gate(p).unitary();
            assert!(max_dev(&d, &gate_fabric(p)) < 1e-12, "{a} {b}");
        }
    }

    #[test]
    fn native_ops_are_unitary() {
        assert!(unitarity_defect(&NativeOp::Rxx(0.81).unitary()) < 1e-14);
        let rz = NativeOp::RzPair { first: 0.2, second: -1.3 }.unitary();
        assert!(max_dev(&matmul4(&adjoint4(&rz), &rz), &identity4()) < 1e-14);
    }

    #[test]
    fn swap_transform_examples() {
        let p = GateFabricParams::new(0.3, 0.7);
        assert_eq!(swap_isometry_inputs(p, Ancilla::Zero), GateFabricParams::new(0.3 - FRAC_PI_2, 0.7));
        assert_eq!(swap_isometry_inputs(p, Ancilla::One), GateFabricParams::new(0.3 + FRAC_PI_2, 0.7));
        for anc in [Ancilla::Zero, Ancilla::One] {
            let w = isometry_right(swap_isometry_inputs(p, anc), anc);
            let want = isometry_left(p, anc);
            for (x, y) in w.iter().flatten().zip(want.iter().flatten()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn wrap_into_half_open_interval() {
        assert!((wrap_angle(PI) + PI).abs() < 1e-15);
        assert!((wrap_angle(-PI) + PI).abs() < 1e-15);
        assert!((wrap_angle(7.0) - (7.0 - 2.0 * PI)).abs() < 1e-15);
        assert!((wrap_angle(0.25) - 0.25).abs() < 1e-15);
    }
}
