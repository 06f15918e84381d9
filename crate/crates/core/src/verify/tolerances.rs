//! Named tolerances of the verification batteries, overridable from the
//! command line.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Tolerance table with every battery threshold pinned to its default.
#[derive(Debug, Clone)]
pub struct ToleranceSet {
    values: BTreeMap<&'static str, f64>,
}

const DEFAULTS: &[(&str, f64)] = &[
    ("algebra", 1e-12),
    ("nullity_covariance", 1e-12),
    ("pairing_alpha", 1e-12),
    ("pairing_e1", 1e-12),
    ("bogoliubov_alpha", 1e-8),
    ("bogoliubov_cross_covariance", 1e-12),
    ("flavor_filtered_rel", 0.02),
    ("flavor_probe_level_rel", 0.05),
    ("qd_e1_abs", 1e-6),
    ("kernel_flat_abs", 1e-8),
    ("kernel_lorentzian_rel", 1e-6),
    ("kernel_normalization_rel", 1e-10),
    ("perturbation_rel", 0.10),
    ("functional_identity", 1e-12),
    ("pauli_abs", 1e-14),
    ("solver_energy_agreement", 1e-9),
    ("solver_residual", 1e-10),
    ("cone_grid_margin", 1e-6),
    ("e1_symmetry", 1e-12),
];

impl Default for ToleranceSet {
    fn default() -> Self {
        Self {
            values: DEFAULTS.iter().copied().collect(),
        }
    }
}

impl ToleranceSet {
    pub fn get(&self, name: &str) -> f64 {
        *self
            .values
            .get(name)
            .unwrap_or_else(|| panic!("unknown tolerance `{name}` requested by a battery"))
    }

    /// Override a named tolerance; unknown names are configuration errors.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Config(format!(
                "tolerance `{name}` must be a non-negative number, got {value}"
            )));
        }
        let Some(key) = DEFAULTS.iter().map(|(k, _)| *k).find(|k| *k == name) else {
            let known: Vec<&str> = DEFAULTS.iter().map(|(k, _)| *k).collect();
            return Err(Error::Config(format!(
                "unknown tolerance `{name}`; known names: {}",
                known.join(", ")
            )));
        };
        self.values.insert(key, value);
        Ok(())
    }

    pub fn names() -> Vec<&'static str> {
        DEFAULTS.iter().map(|(k, _)| *k).collect()
    }
}
