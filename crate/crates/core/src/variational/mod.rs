//! Variational ground-state preparation and spectrum estimation.

pub mod checkpoint;
pub mod optimizer;
pub mod vqe;
pub mod vqse;

pub use checkpoint::Checkpoint;
pub use optimizer::{optimize_angles, Curvature, Method, Objective, OptimizationReport, OptimizerConfig, SpsaGains};
pub use vqe::{vqe_energy, vqe_optimize, VqeObjective};
pub use vqse::{
    diagonalizer_bonds, spectrum_from_counts, spectrum_from_values, vqse_diagonalize, vqse_loss, DiagonalizerAnsatz,
    SpectrumEstimate, VqseCost, VqseObjective,
};
