//! Preset model families and the hamiltonian builder.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::SecondQuantizedOperator;
use crate::models::modes::{single_particle_modes, ModeBasis};
use crate::models::quadratic::{InteractionSpec, QuadraticModel};

/// One on-site resonant level attached to the inner system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeAttachment {
    /// Level energy relative to the inner chemical potential.
    pub energy: f64,
    /// Tunneling amplitude between the level and its contact site.
    pub coupling: f64,
    /// Contact site in the inner model.
    pub site: usize,
}

/// One `(xi, delta)` pair of the pairing toy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub xi: f64,
    pub delta: f64,
}

/// Every hamiltonian family the laboratory knows how to build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    /// Open tight-binding chain, `-t sum (c+_i c_{i+1} + h.c.)`.
    FreeChain { sites: usize, hopping: f64 },
    /// Free chain plus nearest-neighbor density-density repulsion.
    InteractingChain {
        sites: usize,
        hopping: f64,
        interaction: f64,
    },
    /// Independent two-mode pairing blocks
    /// `xi (n_0 + n_1) + delta (c+_0 c+_1 + h.c.)` per pair.
    PairingToy { pairs: Vec<PairSpec> },
    /// Normal chain tunnel-coupled to a chain segment with nearest-neighbor
    /// pairing; the tunnel bond carries amplitude `t sqrt(transmission)`.
    ProximityChain {
        normal_sites: usize,
        sc_sites: usize,
        hopping: f64,
        pairing_gap: f64,
        tunneling: f64,
    },
    /// Any inner model with resonant probe levels appended after the system
    /// modes, coupled through `coupling (c+_site d + d+ c_site)`.
    ProbeCoupled {
        inner: Box<ModelConfig>,
        probes: Vec<ProbeAttachment>,
    },
}

/// A fully assembled model: operator, its eigenmode basis, and the
/// quadratic/interaction split it was built from.
#[derive(Debug, Clone)]
pub struct BuiltModel {
    pub operator: SecondQuantizedOperator,
    pub mode_basis: ModeBasis,
    pub quadratic: QuadraticModel,
    pub interaction: InteractionSpec,
}

impl BuiltModel {
    pub fn mode_count(&self) -> usize {
        self.quadratic.mode_count()
    }
}

fn chain_matrix(m: usize, t: f64) -> DMatrix<Complex64> {
    DMatrix::from_fn(m, m, |r, c| {
        if r.abs_diff(c) == 1 {
            Complex64::new(-t, 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

impl ModelConfig {
    /// Total fermionic mode count, probes included.
    pub fn mode_count(&self) -> usize {
        match self {
            Self::FreeChain { sites, .. } => *sites,
            Self::InteractingChain { sites, .. } => *sites,
            Self::PairingToy { pairs } => 2 * pairs.len(),
            Self::ProximityChain {
                normal_sites,
                sc_sites,
                ..
            } => normal_sites + sc_sites,
            Self::ProbeCoupled { inner, probes } => inner.mode_count() + probes.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParameter(msg));
        match self {
            Self::FreeChain { sites, hopping } => {
                if *sites < 2 {
                    return fail("free_chain needs at least 2 sites".into());
                }
                if *hopping <= 0.0 {
                    return fail(format!("free_chain hopping must be positive, got {hopping}"));
                }
            }
            Self::InteractingChain { sites, hopping, .. } => {
                if *sites < 2 {
                    return fail("interacting_chain needs at least 2 sites".into());
                }
                if *hopping <= 0.0 {
                    return fail(format!(
                        "interacting_chain hopping must be positive, got {hopping}"
                    ));
                }
            }
            Self::PairingToy { pairs } => {
                if pairs.is_empty() {
                    return fail("pairing_toy needs at least one pair".into());
                }
                if pairs.iter().any(|p| p.delta < 0.0) {
                    return fail("pairing_toy deltas must be non-negative".into());
                }
            }
            Self::ProximityChain {
                normal_sites,
                sc_sites,
                hopping,
                pairing_gap,
                tunneling,
            } => {
                if *normal_sites < 1 || *sc_sites < 2 {
                    return fail(
                        "proximity_chain needs >= 1 normal and >= 2 paired sites".into(),
                    );
                }
                if *hopping <= 0.0 || *pairing_gap <= 0.0 {
                    return fail(format!(
                        "proximity_chain hopping and pairing_gap must be positive, got t={hopping}, delta={pairing_gap}"
                    ));
                }
                if !(0.0..=1.0).contains(tunneling) {
                    return fail(format!(
                        "proximity_chain tunneling is a transmission in [0, 1], got {tunneling}"
                    ));
                }
            }
            Self::ProbeCoupled { inner, probes } => {
                inner.validate()?;
                if probes.is_empty() {
                    return fail("probe_coupled needs at least one probe".into());
                }
                let inner_modes = inner.mode_count();
                for p in probes {
                    if p.coupling < 0.0 {
                        return fail(format!(
                            "probe coupling must be non-negative, got {}",
                            p.coupling
                        ));
                    }
                    if p.site >= inner_modes {
                        return Err(Error::ModeOutOfRange {
                            mode: p.site,
                            modes: inner_modes,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Split into the quadratic part and the interaction part.
    pub fn decompose(&self) -> Result<(QuadraticModel, InteractionSpec)> {
        self.validate()?;
        match self {
            Self::FreeChain { sites, hopping } => Ok((
                QuadraticModel::new(chain_matrix(*sites, *hopping), None, 0.0)?,
                InteractionSpec::none(),
            )),
            Self::InteractingChain {
                sites,
                hopping,
                interaction,
            } => {
                let couplings = (0..sites - 1).map(|i| (i, i + 1, *interaction)).collect();
                Ok((
                    QuadraticModel::new(chain_matrix(*sites, *hopping), None, 0.0)?,
                    InteractionSpec::density_density(couplings)?,
                ))
            }
            Self::PairingToy { pairs } => {
                let m = 2 * pairs.len();
                let mut h = DMatrix::<Complex64>::zeros(m, m);
                let mut d = DMatrix::<Complex64>::zeros(m, m);
                for (p, pair) in pairs.iter().enumerate() {
                    let (a, b) = (2 * p, 2 * p + 1);
                    h[(a, a)] = Complex64::new(pair.xi, 0.0);
                    h[(b, b)] = Complex64::new(pair.xi, 0.0);
                    d[(a, b)] = Complex64::new(pair.delta, 0.0);
                    d[(b, a)] = Complex64::new(-pair.delta, 0.0);
                }
                Ok((
                    QuadraticModel::new(h, Some(d), 0.0)?,
                    InteractionSpec::none(),
                ))
            }
            Self::ProximityChain {
                normal_sites,
                sc_sites,
                hopping,
                pairing_gap,
                tunneling,
            } => {
                let m = normal_sites + sc_sites;
                let mut h = DMatrix::<Complex64>::zeros(m, m);
                for i in 0..m - 1 {
                    let amplitude = if i + 1 == *normal_sites {
                        -hopping * tunneling.sqrt()
                    } else {
                        -hopping
                    };
                    h[(i, i + 1)] = Complex64::new(amplitude, 0.0);
                    h[(i + 1, i)] = Complex64::new(amplitude, 0.0);
                }
                let mut d = DMatrix::<Complex64>::zeros(m, m);
                for i in *normal_sites..m - 1 {
                    d[(i, i + 1)] = Complex64::new(*pairing_gap, 0.0);
                    d[(i + 1, i)] = Complex64::new(-*pairing_gap, 0.0);
                }
                Ok((
                    QuadraticModel::new(h, Some(d), 0.0)?,
                    InteractionSpec::none(),
                ))
            }
            Self::ProbeCoupled { inner, probes } => {
                let (inner_quad, interaction) = inner.decompose()?;
                let m_in = inner_quad.mode_count();
                let m = m_in + probes.len();
                let mut h = DMatrix::<Complex64>::zeros(m, m);
                h.view_mut((0, 0), (m_in, m_in))
                    .copy_from(inner_quad.hopping());
                let mut d = DMatrix::<Complex64>::zeros(m, m);
                if let Some(inner_d) = inner_quad.pairing() {
                    d.view_mut((0, 0), (m_in, m_in)).copy_from(inner_d);
                }
                for (j, probe) in probes.iter().enumerate() {
                    let level = m_in + j;
                    h[(level, level)] = Complex64::new(probe.energy, 0.0);
                    h[(probe.site, level)] = Complex64::new(probe.coupling, 0.0);
                    h[(level, probe.site)] = Complex64::new(probe.coupling, 0.0);
                }
                let pairing = if inner_quad.pairing().is_some() {
                    Some(d)
                } else {
                    None
                };
                Ok((
                    QuadraticModel::new(h, pairing, inner_quad.chemical_potential())?,
                    interaction,
                ))
            }
        }
    }

    /// Assemble the hermitian operator and the eigenmode basis of its
    /// number-conserving quadratic part.
    pub fn build(&self) -> Result<BuiltModel> {
        let (quadratic, interaction) = self.decompose()?;
        let mut operator = quadratic.to_operator();
        if !interaction.is_trivial() {
            operator = operator.add(&interaction.to_operator(quadratic.mode_count()));
        }
        let mode_basis = single_particle_modes(&quadratic.number_conserving_part())?;
        Ok(BuiltModel {
            operator,
            mode_basis,
            quadratic,
            interaction,
        })
    }

    /// Compact identifier used in result rows.
    pub fn model_id(&self) -> String {
        match self {
            Self::FreeChain { sites, hopping } => format!("free_chain[M={sites},t={hopping}]"),
            Self::InteractingChain {
                sites,
                hopping,
                interaction,
            } => format!("interacting_chain[M={sites},t={hopping},V={interaction}]"),
            Self::PairingToy { pairs } => {
                let body: Vec<String> = pairs
                    .iter()
                    .map(|p| format!("({},{})", p.xi, p.delta))
                    .collect();
                format!("pairing_toy[{}]", body.join(";"))
            }
            Self::ProximityChain {
                normal_sites,
                sc_sites,
                hopping,
                pairing_gap,
                tunneling,
            } => format!(
                "proximity_chain[N={normal_sites},SC={sc_sites},t={hopping},delta={pairing_gap},T={tunneling}]"
            ),
            Self::ProbeCoupled { inner, probes } => {
                let body: Vec<String> = probes
                    .iter()
                    .map(|p| format!("(e={},v={},x={})", p.energy, p.coupling, p.site))
                    .collect();
                format!("probe_coupled[{};{}]", inner.model_id(), body.join(";"))
            }
        }
    }
}
