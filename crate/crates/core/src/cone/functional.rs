//! State functionals on an observable set and the designated pure sets.

use crate::error::{Error, Result};

/// Tolerance for the normalization component `lambda(A_0) = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-10;
/// Two functionals closer than this (max-norm) count as the same state.
pub const DISTINCT_TOL: f64 = 1e-10;

/// Expectation values `(lambda(A_0), lambda(A_1), ..., lambda(A_n))` of one
/// state on the chosen observable set; the first component is the
/// normalization and must equal one.
#[derive(Debug, Clone, PartialEq)]
pub struct StateFunctional {
    values: Vec<f64>,
    label: String,
}

impl StateFunctional {
    pub fn new(values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter(
                "state functional needs at least the normalization component".into(),
            ));
        }
        if (values[0] - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidParameter(format!(
                "state functional must have lambda(A_0) = 1, got {}",
                values[0]
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "state functional entries must be finite".into(),
            ));
        }
        Ok(Self {
            values,
            label: label.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Component on observable `A_j`.
    pub fn value(&self, j: usize) -> f64 {
        self.values[j]
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(other.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// The designated extremal states spanning the accessible cone.
#[derive(Debug, Clone)]
pub struct ConeSpec {
    pure: Vec<StateFunctional>,
}

impl ConeSpec {
    pub fn new(pure: Vec<StateFunctional>) -> Result<Self> {
        if pure.is_empty() {
            return Err(Error::InvalidParameter(
                "cone needs a nonempty pure set".into(),
            ));
        }
        let dim = pure[0].dim();
        if pure.iter().any(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                got: pure.iter().map(StateFunctional::dim).max().unwrap(),
                expected: dim,
            });
        }
        for i in 0..pure.len() {
            for j in i + 1..pure.len() {
                if pure[i].max_distance(&pure[j]) <= DISTINCT_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "pure states {i} and {j} coincide"
                    )));
                }
            }
        }
        Ok(Self { pure })
    }

    /// Build a cone, silently dropping duplicate pure states.
    pub fn deduplicated(pure: Vec<StateFunctional>) -> Result<Self> {
        let mut kept: Vec<StateFunctional> = Vec::new();
        for p in pure {
            if kept.iter().all(|q| q.max_distance(&p) > DISTINCT_TOL) {
                kept.push(p);
            }
        }
        Self::new(kept)
    }

    pub fn pure(&self) -> &[StateFunctional] {
        &self.pure
    }

    pub fn len(&self) -> usize {
        self.pure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pure.is_empty()
    }

    pub fn functional_dim(&self) -> usize {
        self.pure[0].dim()
    }
}
