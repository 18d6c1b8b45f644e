//! Dense simulation of deep multi-scale entanglement renormalization (DMERA)
//! circuits, causal-cone reduction of M-qubit subsystems, and variational
//! estimation of their entanglement spectra.
//!
//! Basis convention, used everywhere: wire 0 is the most significant bit of a
//! computational-basis index, so `|a b c>` on three wires has index `4a + 2b + c`.
//!
//! Module map:
//! - [`qsim`]: statevector and density-matrix backends, partial traces,
//!   entropies, distances and sampling.
//! - [`dmera`]: the parity-preserving gate fabric, DMERA construction and
//!   causal cones.
//! - [`lrtim`]: the long-range transverse-field Ising Hamiltonian and its exact
//!   ground state.
//! - [`variational`]: optimizers, VQE over DMERA angles and VQSE
//!   diagonalization.
//! - [`noise`]: depolarizing and readout channels, gate folding and
//!   mitigation.

pub mod dmera;
pub mod error;
pub mod lrtim;
pub mod noise;
pub mod qsim;
pub mod variational;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
