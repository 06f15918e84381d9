//! The normalized irreducible correlator `alpha` in three realizations,
//! the probe-induced state functionals, and the frequency-kernel quadrature.
//!
//! Probe character fixes which transition the probe drives in the system:
//! a particle probe extracts an electron (its system-side transition
//! operator annihilates at the probed mode or site), a hole probe injects
//! one. The occupation observable of a particle probe is `n`, that of a
//! hole probe `1 - n`.

pub mod cone_states;
pub mod filtered;
pub mod kernel;
pub mod mode_flavor;
pub mod probe_level;
pub mod select;

pub use cone_states::{cone_states, pauli_check};
pub use filtered::filtered_correlator;
pub use kernel::{
    alpha_from_spectrum, kernel_normalization, KernelAlpha, KernelParams, SpectrumTable,
};
pub use mode_flavor::{mode_correlator_by_indices, mode_occupation_correlator};
pub use probe_level::probe_level_correlator;
pub use select::{select_mode, select_mode_for_probe};

use crate::error::{Error, Result};

/// Whether a probe extracts electrons (empty reservoirs) or injects them
/// (occupied reservoirs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeCharacter {
    Particle,
    Hole,
}

/// A resonant-level probe: energy relative to the chemical potential,
/// particle/hole character, filter width, contact site and (for the
/// probe-level realization) its tunneling amplitude.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub energy: f64,
    pub character: ProbeCharacter,
    pub width: f64,
    #[serde(default)]
    pub site: usize,
    #[serde(default)]
    pub coupling: f64,
}

impl ProbeSpec {
    pub fn particle(energy: f64, width: f64, site: usize) -> Self {
        Self {
            energy,
            character: ProbeCharacter::Particle,
            width,
            site,
            coupling: 0.0,
        }
    }

    pub fn hole(energy: f64, width: f64, site: usize) -> Self {
        Self {
            energy,
            character: ProbeCharacter::Hole,
            width,
            site,
            coupling: 0.0,
        }
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.width <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "probe width must be positive, got {}",
                self.width
            )));
        }
        if self.coupling < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "probe coupling must be non-negative, got {}",
                self.coupling
            )));
        }
        Ok(())
    }

    /// True when the sign convention (particle above, hole below the
    /// chemical potential) is violated. A warning condition, not an error.
    pub fn sign_convention_warning(&self) -> bool {
        match self.character {
            ProbeCharacter::Particle => self.energy <= 0.0,
            ProbeCharacter::Hole => self.energy >= 0.0,
        }
    }
}

/// Which realization produced an [`AlphaResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaFlavor {
    Mode,
    Filtered,
    ProbeLevel,
}

impl AlphaFlavor {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Mode => "mode",
            Self::Filtered => "filtered",
            Self::ProbeLevel => "probe_level",
        }
    }
}

/// Auxiliary detail carried alongside the correlator value.
#[derive(Debug, Clone, Default)]
pub struct AlphaDiagnostics {
    /// Eigenmode indices addressed by the two probes (mode flavor).
    pub selected_modes: Option<(usize, usize)>,
    /// Energies of the selected modes.
    pub mode_energies: Option<(f64, f64)>,
    /// Number of eigenstates carrying filter weight above one half
    /// (filtered flavor).
    pub resonant_states: Option<(usize, usize)>,
    /// Degenerate many-body levels inside a filter window.
    pub degenerate_filter_levels: bool,
    /// Tunneling amplitudes of the extrapolation sequence (probe level).
    pub coupling_sequence: Vec<f64>,
    /// Correlator values along the extrapolation sequence.
    pub alpha_sequence: Vec<f64>,
    /// Whether the halving sequence contracted.
    pub extrapolation_converged: Option<bool>,
    /// Character/energy sign conventions violated by a probe.
    pub character_warning: bool,
}

/// The normalized correlator and its raw ingredients:
/// `alpha = (cross - mean0 mean1) / (mean0 mean1)`.
#[derive(Debug, Clone)]
pub struct AlphaResult {
    pub alpha: f64,
    pub mean0: f64,
    pub mean1: f64,
    /// Symmetrized second moment of the two probe observables.
    pub cross: f64,
    pub covariance: f64,
    pub flavor: AlphaFlavor,
    pub diagnostics: AlphaDiagnostics,
}

impl AlphaResult {
    pub(crate) fn from_moments(
        mean0: f64,
        mean1: f64,
        cross: f64,
        flavor: AlphaFlavor,
        diagnostics: AlphaDiagnostics,
    ) -> Result<Self> {
        let floor = 1e-14;
        if mean0.abs() < floor || mean1.abs() < floor {
            return Err(Error::VanishingProbeCurrent {
                mean: mean0.abs().min(mean1.abs()),
            });
        }
        let covariance = cross - mean0 * mean1;
        Ok(Self {
            alpha: covariance / (mean0 * mean1),
            mean0,
            mean1,
            cross,
            covariance,
            flavor,
            diagnostics,
        })
    }

    pub fn is_negative(&self) -> bool {
        self.alpha < 0.0
    }
}
