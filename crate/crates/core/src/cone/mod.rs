//! Generalized entanglement over convex cones of state functionals:
//! the closed two-state form and the entropy-minimizing decomposition
//! solver for general pure sets.

pub mod closed_form;
pub mod functional;
pub mod general;

pub use closed_form::{
    decompose_unique, e1_closed_form, shannon_entropy, DecompositionStatus, UniqueDecomposition,
};
pub use functional::{ConeSpec, StateFunctional};
pub use general::{
    entanglement_general, polytope_grid_entropy, purity_check, EntanglementReport, ReportStatus,
};
