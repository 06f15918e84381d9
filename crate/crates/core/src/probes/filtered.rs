//! Energy-filtered realization of the correlator.
//!
//! Each probe is represented by a filtered transition operator
//! `A = sum_m w_m |m><m| psi` built from the exact eigenstates, where `psi`
//! removes (particle character) or adds (hole character) an electron at the
//! probe site and the amplitude weights square to a Lorentzian of width
//! `gamma` centered at excitation energy `|eps|` above the ground state.
//! The probe occupancy is `n = A+ A`, a positive operator.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockVector, LadderOp, OperatorTerm, SecondQuantizedOperator};
use crate::probes::{AlphaDiagnostics, AlphaFlavor, AlphaResult, ProbeCharacter, ProbeSpec};
use crate::solver::SpectrumResult;

struct FilterSide {
    transition: SecondQuantizedOperator,
    weights_sq: Vec<f64>,
    resonant_states: usize,
    degenerate: bool,
}

fn site_transition(site: usize, character: ProbeCharacter) -> SecondQuantizedOperator {
    let factor = match character {
        ProbeCharacter::Particle => LadderOp::annihilate(site),
        ProbeCharacter::Hole => LadderOp::create(site),
    };
    SecondQuantizedOperator::new(vec![OperatorTerm::new(Complex64::ONE, vec![factor])])
}

fn build_side(
    spectrum: &SpectrumResult,
    ground_energy: f64,
    probe: &ProbeSpec,
    dim: usize,
) -> Result<FilterSide> {
    let gamma = probe.width;
    let center = ground_energy + probe.energy.abs();
    let needed = center + 3.0 * gamma;
    let available = *spectrum
        .eigenvalues
        .last()
        .expect("spectrum is nonempty");
    if spectrum.len() < dim && available < needed {
        return Err(Error::InsufficientSpectrum { needed, available });
    }

    let weights_sq: Vec<f64> = spectrum
        .eigenvalues
        .iter()
        .map(|&e| {
            let d = e - center;
            gamma * gamma / (d * d + gamma * gamma)
        })
        .collect();
    let resonant_states = weights_sq.iter().filter(|&&w| w > 0.5).count();

    // Degenerate many-body levels inside the filter window: the individual
    // eigenvectors are basis dependent, the filtered occupancy is not.
    let mut degenerate = false;
    for i in 1..spectrum.len() {
        if weights_sq[i].max(weights_sq[i - 1]) > 0.01
            && (spectrum.eigenvalues[i] - spectrum.eigenvalues[i - 1]).abs()
                < spectrum.degeneracy_tol
        {
            degenerate = true;
            break;
        }
    }

    Ok(FilterSide {
        transition: site_transition(probe.site, probe.character),
        weights_sq,
        resonant_states,
        degenerate,
    })
}

impl FilterSide {
    /// `P v = sum_m w_m^2 <m|v> |m>`.
    fn filter(&self, spectrum: &SpectrumResult, v: &FockVector) -> FockVector {
        let mut out = FockVector::zeros(std::sync::Arc::clone(v.basis()));
        for (m, vec) in spectrum.eigenvectors.iter().enumerate() {
            let w = self.weights_sq[m];
            if w < 1e-300 {
                continue;
            }
            let overlap = vec.inner(v);
            if overlap.norm_sqr() > 0.0 {
                out = out.add_scaled(vec, overlap * w);
            }
        }
        out
    }

    /// `n v = psi+ P psi v`.
    fn occupancy_apply(&self, spectrum: &SpectrumResult, v: &FockVector) -> Result<FockVector> {
        let down = self.transition.apply(v)?;
        let filtered = self.filter(spectrum, &down);
        self.transition.adjoint().apply(&filtered)
    }
}

/// Correlator of the two filtered probe occupancies in the ground state.
///
/// The spectrum must cover the filter windows: with a truncated spectrum
/// whose top eigenvalue lies inside `center + 3 gamma` the evaluation is
/// refused. The ground state and the spectrum must live on the same basis,
/// which has to be closed under single-site transitions (full space or a
/// parity-complete block set).
pub fn filtered_correlator(
    g: &FockVector,
    ground_energy: f64,
    spectrum: &SpectrumResult,
    probe0: &ProbeSpec,
    probe1: &ProbeSpec,
) -> Result<AlphaResult> {
    probe0.validate()?;
    probe1.validate()?;
    let deviation = (g.norm() - 1.0).abs();
    if deviation >= 1e-10 {
        return Err(Error::NotNormalized { deviation });
    }
    let dim = g.basis().len();

    let side0 = build_side(spectrum, ground_energy, probe0, dim)?;
    let side1 = build_side(spectrum, ground_energy, probe1, dim)?;

    let n0_g = side0.occupancy_apply(spectrum, g)?;
    let n1_g = side1.occupancy_apply(spectrum, g)?;

    let mean0 = g.inner(&n0_g).re;
    let mean1 = g.inner(&n1_g).re;
    // Both occupancies are hermitian, so Re<n0 g|n1 g> is the symmetrized
    // moment <n0 n1 + n1 n0>/2.
    let cross = n0_g.inner(&n1_g).re;

    let diagnostics = AlphaDiagnostics {
        resonant_states: Some((side0.resonant_states, side1.resonant_states)),
        degenerate_filter_levels: side0.degenerate || side1.degenerate,
        character_warning: probe0.sign_convention_warning() || probe1.sign_convention_warning(),
        ..AlphaDiagnostics::default()
    };
    AlphaResult::from_moments(mean0, mean1, cross, AlphaFlavor::Filtered, diagnostics)
}
