//! Fermionic Fock-space representation and exact operator algebra.

pub mod basis;
pub mod operator;
pub mod selftest;
pub mod vector;

pub use basis::FockBasis;
pub use operator::{
    apply_factors, apply_ladder, hermiticity_deviation, LadderOp, OperatorTerm,
    SecondQuantizedOperator, SparseMatrix,
};
pub use selftest::{algebra_selftest, algebra_selftest_with, AlgebraReport};
pub use vector::FockVector;
