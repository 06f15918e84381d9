//! Hamiltonian builders and their analytic companions.

pub mod config;
pub mod modes;
pub mod oracles;
pub mod perturbation;
pub mod quadratic;

pub use config::{BuiltModel, ModelConfig, PairSpec, ProbeAttachment};
pub use modes::{single_particle_modes, ModeBasis};
pub use oracles::{
    bcs_uv_oracle, qd_entanglement_formula, BcsPrediction, QdFormulaInputs, QdPrediction,
};
pub use perturbation::{perturbation_oracle, PerturbationAlpha};
pub use quadratic::{InteractionSpec, QuadraticModel};
