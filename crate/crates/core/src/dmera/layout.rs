//! Gate placement of a DMERA, independent of angles.
//!
//! Step 1 is a single gate on a two-wire register initialized `|0>|1>`. Each
//! later step doubles the register: old wires and fresh ancillas interleave,
//! ancillas pair with the old wire on their left through an isometry (ancilla
//! on the right leg), and one brickwall layer of disentanglers follows. The
//! variants below differ in where the ancillas land, in how the brickwall is
//! aligned, and in which layer comes first. [`Layout::CALIBRATED`] is the one
//! whose left-side cone sizes match the reference qubit-count table; see
//! [`super::calibrate`].

use super::fabric::Ancilla;
use crate::{Error, Result};

/// Register slots taken by fresh ancillas when a step doubles the register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AncillaSlots {
    /// Ancillas at slots `0, 2, 4, ...`; old wire `p` moves to `2p + 1`.
    Even,
    /// Ancillas at slots `1, 3, 5, ...`; old wire `p` moves to `2p`.
    Odd,
}

/// First bond of the disentangler brickwall.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BrickOffset {
    /// Bonds `(0,1), (2,3), ...`
    Aligned,
    /// Bonds `(1,2), (3,4), ...`
    Shifted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepOrder {
    IsometriesFirst,
    DisentanglersFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Layout {
    pub ancilla_slots: AncillaSlots,
    pub brickwall: BrickOffset,
    pub order: StepOrder,
}

impl Layout {
    pub const CALIBRATED: Layout = Layout {
        ancilla_slots: AncillaSlots::Even,
        brickwall: BrickOffset::Aligned,
        order: StepOrder::IsometriesFirst,
    };

    /// Every combination of the three switches.
    pub fn variants() -> Vec<Layout> {
        let mut out = Vec::with_capacity(8);
        for ancilla_slots in [AncillaSlots::Even, AncillaSlots::Odd] {
            for brickwall in [BrickOffset::Aligned, BrickOffset::Shifted] {
                for order in [StepOrder::IsometriesFirst, StepOrder::DisentanglersFirst] {
                    out.push(Layout { ancilla_slots, brickwall, order });
                }
            }
        }
        out
    }

    pub fn label(&self) -> String {
        format!("{:?}/{:?}/{:?}", self.ancilla_slots, self.brickwall, self.order)
    }
}

impl Default for Layout {
    fn default() -> Self {
        Layout::CALIBRATED
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateRole {
    Top,
    Isometry,
    Disentangler,
}

/// A gate slot: wires are final output positions, `wires.0` is the left leg.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkeletonGate {
    pub wires: (usize, usize),
    pub step: usize,
    pub role: GateRole,
}

/// Angle-free DMERA structure over `num_qubits` output positions.
#[derive(Clone, Debug, PartialEq)]
pub struct Skeleton {
    pub num_qubits: usize,
    pub gates: Vec<SkeletonGate>,
    pub inits: Vec<Ancilla>,
}

/// Number of renormalization steps, `log2 N`.
pub fn num_steps(num_qubits: usize) -> Result<usize> {
    if num_qubits < 2 || !num_qubits.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(num_qubits));
    }
    Ok(num_qubits.trailing_zeros() as usize)
}

pub fn skeleton(num_qubits: usize, layout: Layout) -> Result<Skeleton> {
    let steps = num_steps(num_qubits)?;
    // Gates are first recorded on wire ids (creation order) and relabeled to
    // final positions once the register is complete.
    let mut register: Vec<usize> = vec![0, 1];
    let mut inits = vec![Ancilla::Zero, Ancilla::One];
    let mut gates = vec![SkeletonGate { wires: (0, 1), step: 1, role: GateRole::Top }];

    for step in 2..=steps {
        let m = 1usize << step;
        let mut next = vec![usize::MAX; m];
        let (old_parity, anc_parity) = match layout.ancilla_slots {
            AncillaSlots::Even => (1, 0),
            AncillaSlots::Odd => (0, 1),
        };
        for (p, &w) in register.iter().enumerate() {
            next[2 * p + old_parity] = w;
        }
        for (k, slot) in (anc_parity..m).step_by(2).enumerate() {
            next[slot] = inits.len();
            inits.push(if k % 2 == 0 { Ancilla::Zero } else { Ancilla::One });
        }

        let isometries: Vec<(usize, usize)> = (old_parity..m - 1)
            .step_by(2)
            .map(|q| (next[q], next[q + 1]))
            .collect();
        let offset = match layout.brickwall {
            BrickOffset::Aligned => 0,
            BrickOffset::Shifted => 1,
        };
        let disentanglers: Vec<(usize, usize)> =
            (offset..m - 1).step_by(2).map(|q| (next[q], next[q + 1])).collect();

        let layers = match layout.order {
            StepOrder::IsometriesFirst => [(isometries, GateRole::Isometry), (disentanglers, GateRole::Disentangler)],
            StepOrder::DisentanglersFirst => {
                [(disentanglers, GateRole::Disentangler), (isometries, GateRole::Isometry)]
            }
        };
        for (layer, role) in layers {
            gates.extend(layer.into_iter().map(|wires| SkeletonGate { wires, step, role }));
        }
        register = next;
    }

    let mut position = vec![0; register.len()];
    for (pos, &w) in register.iter().enumerate() {
        position[w] = pos;
    }
    for g in gates.iter_mut() {
        g.wires = (position[g.wires.0], position[g.wires.1]);
    }
    let inits = register.iter().map(|&w| inits[w]).collect();
    Ok(Skeleton { num_qubits, gates, inits })
}

/// Gates in a DMERA of `num_qubits` under `layout`.
pub fn gate_count(num_qubits: usize, layout: Layout) -> Result<usize> {
    Ok(skeleton(num_qubits, layout)?.gates.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubits_is_a_single_gate() {
        let s = skeleton(2, Layout::CALIBRATED).unwrap();
        assert_eq!(s.gates.len(), 1);
        assert_eq!(s.inits, vec![Ancilla::Zero, Ancilla::One]);
    }

    #[test]
    fn calibrated_counts() {
        // each doubling to m wires adds m/2 - 1 isometries and m/2 disentanglers
        assert_eq!(gate_count(4, Layout::CALIBRATED).unwrap(), 4);
        assert_eq!(gate_count(8, Layout::CALIBRATED).unwrap(), 11);
        assert_eq!(gate_count(16, Layout::CALIBRATED).unwrap(), 26);
    }

    #[test]
    fn four_qubit_structure() {
        let s = skeleton(4, Layout::CALIBRATED).unwrap();
        let wires: Vec<_> = s.gates.iter().map(|g| g.wires).collect();
        // old wires sit at 1 and 3, the single isometry pairs 1 with ancilla 2
        assert_eq!(wires, vec![(1, 3), (1, 2), (0, 1), (2, 3)]);
        assert_eq!(s.inits, vec![Ancilla::Zero, Ancilla::Zero, Ancilla::One, Ancilla::One]);
    }

    #[test]
    fn rejects_non_powers_of_two() {
        assert_eq!(skeleton(6, Layout::CALIBRATED), Err(Error::NotPowerOfTwo(6)));
        assert_eq!(skeleton(1, Layout::CALIBRATED), Err(Error::NotPowerOfTwo(1)));
    }

    #[test]
    fn every_variant_builds() {
        for layout in Layout::variants() {
            let s = skeleton(16, layout).unwrap();
            assert!(s.gates.iter().all(|g| g.wires.0 < 16 && g.wires.1 < 16 && g.wires.0 != g.wires.1));
        }
    }
}
