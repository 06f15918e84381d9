//! Occupation-number realization of the correlator: probe observables are
//! eigenmode occupations of the number-conserving quadratic part.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::models::ModeBasis;
use crate::probes::select::select_mode_for_probe;
use crate::probes::{AlphaDiagnostics, AlphaFlavor, AlphaResult, ProbeCharacter, ProbeSpec};

/// Apply the probe observable `m = n_k` (particle) or `1 - n_k` (hole) to a
/// state.
fn apply_observable(
    g: &FockVector,
    basis: &ModeBasis,
    mode: usize,
    character: ProbeCharacter,
) -> Result<FockVector> {
    let n = basis.mode_number_operator(mode);
    let ng = n.apply(g)?;
    Ok(match character {
        ProbeCharacter::Particle => ng,
        ProbeCharacter::Hole => g.add_scaled(&ng, -Complex64::ONE),
    })
}

/// Correlator for explicit mode indices; the public entry point resolves
/// probe energies first.
pub fn mode_correlator_by_indices(
    g: &FockVector,
    basis: &ModeBasis,
    mode0: usize,
    character0: ProbeCharacter,
    mode1: usize,
    character1: ProbeCharacter,
) -> Result<AlphaResult> {
    if mode0 == mode1 {
        return Err(Error::InvalidParameter(format!(
            "probes must select distinct modes, both resolve to {mode0}"
        )));
    }
    let deviation = (g.norm() - 1.0).abs();
    if deviation >= 1e-10 {
        return Err(Error::NotNormalized { deviation });
    }

    let w0 = apply_observable(g, basis, mode0, character0)?;
    let w1 = apply_observable(g, basis, mode1, character1)?;
    let mean0 = g.inner(&w0).re;
    let mean1 = g.inner(&w1).re;
    // The observables are commuting hermitian operators, so the symmetrized
    // second moment is just the real part of the overlap.
    let cross = w0.inner(&w1).re;

    let diagnostics = AlphaDiagnostics {
        selected_modes: Some((mode0, mode1)),
        mode_energies: Some((basis.energies()[mode0], basis.energies()[mode1])),
        ..AlphaDiagnostics::default()
    };
    AlphaResult::from_moments(mean0, mean1, cross, AlphaFlavor::Mode, diagnostics)
}

/// Occupation correlator
/// `alpha = (<m0 m1> - <m0><m1>) / (<m0><m1>)` of two probes resolved to
/// eigenmodes by energy (site as tie-break), with `m = n` for particle and
/// `1 - n` for hole character.
pub fn mode_occupation_correlator(
    g: &FockVector,
    basis: &ModeBasis,
    probe0: &ProbeSpec,
    probe1: &ProbeSpec,
    select_tol: f64,
) -> Result<AlphaResult> {
    probe0.validate()?;
    probe1.validate()?;
    let mode0 = select_mode_for_probe(basis, probe0, select_tol)?;
    let mode1 = select_mode_for_probe(basis, probe1, select_tol)?;
    let mut result = mode_correlator_by_indices(
        g,
        basis,
        mode0,
        probe0.character,
        mode1,
        probe1.character,
    )?;
    result.diagnostics.character_warning =
        probe0.sign_convention_warning() || probe1.sign_convention_warning();
    Ok(result)
}
