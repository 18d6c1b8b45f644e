//! Selecting the gate layout from published cone sizes.
//!
//! The reference table lists, per `(N, M)`, the number of wires and angles in
//! the causal cones of the left-most and right-most `M` qubits. Only the
//! left-side wire counts are used to pick a layout; everything else is
//! reported alongside for comparison.

use super::layout::Layout;
use super::{causal_cone, count_angles, DmeraSpec, Side, SubsystemSpec};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub num_qubits: usize,
    /// Inclusive range of subsystem sizes sharing this row.
    pub sizes: (usize, usize),
    pub left_qubits: usize,
    pub right_qubits: usize,
    pub left_angles: usize,
    pub right_angles: usize,
}

impl TableRow {
    pub fn qubits(&self, side: Side) -> usize {
        match side {
            Side::Left => self.left_qubits,
            Side::Right => self.right_qubits,
        }
    }

    pub fn angles(&self, side: Side) -> usize {
        match side {
            Side::Left => self.left_angles,
            Side::Right => self.right_angles,
        }
    }
}

pub const REFERENCE_TABLE: [TableRow; 5] = [
    TableRow { num_qubits: 16, sizes: (2, 2), left_qubits: 8, right_qubits: 5, left_angles: 14, right_angles: 14 },
    TableRow { num_qubits: 16, sizes: (3, 4), left_qubits: 9, right_qubits: 8, left_angles: 18, right_angles: 24 },
    TableRow { num_qubits: 16, sizes: (5, 6), left_qubits: 11, right_qubits: 9, left_angles: 26, right_angles: 28 },
    TableRow { num_qubits: 8, sizes: (2, 2), left_qubits: 6, right_qubits: 4, left_angles: 10, right_angles: 10 },
    TableRow { num_qubits: 8, sizes: (3, 4), left_qubits: 7, right_qubits: 6, left_angles: 14, right_angles: 18 },
];

/// Table row covering `(num_qubits, m)`, if any.
pub fn reference_row(num_qubits: usize, m: usize) -> Option<TableRow> {
    REFERENCE_TABLE
        .iter()
        .copied()
        .find(|r| r.num_qubits == num_qubits && (r.sizes.0..=r.sizes.1).contains(&m))
}

/// `(wires, angles)` of the cone of `m` qubits on `side`.
pub fn structural_counts(layout: Layout, num_qubits: usize, side: Side, m: usize) -> Result<(usize, usize)> {
    let spec = DmeraSpec::zeros(num_qubits, layout)?;
    let cone = causal_cone(&spec, SubsystemSpec::new(side, m)?)?;
    Ok((cone.num_physical(), count_angles(&cone)))
}

/// True when every left-side wire count in the table is reproduced.
pub fn matches_left_table(layout: Layout) -> bool {
    REFERENCE_TABLE.iter().all(|row| {
        (row.sizes.0..=row.sizes.1).all(|m| {
            structural_counts(layout, row.num_qubits, Side::Left, m).map(|c| c.0) == Ok(row.left_qubits)
        })
    })
}

/// All layout variants reproducing the left-side wire counts.
pub fn calibrate() -> Vec<Layout> {
    Layout::variants().into_iter().filter(|l| matches_left_table(*l)).collect()
}
