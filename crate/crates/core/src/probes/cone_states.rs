//! State functionals induced by the probes: the ground functional, the
//! post-extraction functional and the nilpotent reference.
//!
//! The static realization takes the probe-conditioned density matrix
//! proportional to `f |g><g| f+`, where `f` is the probe's system-side
//! transition operator: the eigenmode annihilator for particle character,
//! the creator for hole character. Then `f+ f` is exactly the probe
//! observable `m`, and `lambda_0(A_1) = <m_0 m_1> / <m_0>`.

use crate::cone::StateFunctional;
use crate::error::{Error, Result};
use crate::fock::{FockVector, SecondQuantizedOperator};
use crate::models::ModeBasis;
use crate::probes::select::select_mode_for_probe;
use crate::probes::{ProbeCharacter, ProbeSpec};

fn transition_operator(
    basis: &ModeBasis,
    mode: usize,
    character: ProbeCharacter,
) -> SecondQuantizedOperator {
    match character {
        ProbeCharacter::Particle => basis.mode_annihilator(mode),
        ProbeCharacter::Hole => basis.mode_creator(mode),
    }
}

fn observable_expectation(
    state: &FockVector,
    basis: &ModeBasis,
    mode: usize,
    character: ProbeCharacter,
) -> Result<f64> {
    let n = basis.mode_number_operator(mode);
    let value = n.expectation(state)?.re;
    Ok(match character {
        ProbeCharacter::Particle => value,
        ProbeCharacter::Hole => 1.0 - value,
    })
}

/// The three functionals `(lambda_g, lambda_0, lambda_1)` on the observable
/// set `{1, m_1}`.
pub fn cone_states(
    g: &FockVector,
    basis: &ModeBasis,
    probe0: &ProbeSpec,
    probe1: &ProbeSpec,
    select_tol: f64,
) -> Result<(StateFunctional, StateFunctional, StateFunctional)> {
    probe0.validate()?;
    probe1.validate()?;
    let mode0 = select_mode_for_probe(basis, probe0, select_tol)?;
    let mode1 = select_mode_for_probe(basis, probe1, select_tol)?;
    if mode0 == mode1 {
        return Err(Error::InvalidParameter(format!(
            "probes must select distinct modes, both resolve to {mode0}"
        )));
    }

    let lambda_g_a1 = observable_expectation(g, basis, mode1, probe1.character)?;

    let conditioned = |mode: usize, character: ProbeCharacter| -> Result<f64> {
        let f = transition_operator(basis, mode, character);
        let fg = f.apply(g)?;
        let norm = fg.norm();
        if norm * norm < 1e-300 {
            return Err(Error::StateUndefined { norm });
        }
        observable_expectation(&fg.normalized()?, basis, mode1, probe1.character)
    };

    let lambda0_a1 = conditioned(mode0, probe0.character)?;
    let lambda1_a1 = conditioned(mode1, probe1.character)?;

    Ok((
        StateFunctional::new(vec![1.0, lambda_g_a1], "lambda_g")?,
        StateFunctional::new(vec![1.0, lambda0_a1], "lambda_0")?,
        StateFunctional::new(vec![1.0, lambda1_a1], "lambda_1")?,
    ))
}

/// Expectation of the probe's own observable in the state conditioned on
/// its own transition: exactly zero by fermionic nilpotency.
pub fn pauli_check(
    g: &FockVector,
    basis: &ModeBasis,
    probe: &ProbeSpec,
    select_tol: f64,
) -> Result<f64> {
    probe.validate()?;
    let mode = select_mode_for_probe(basis, probe, select_tol)?;
    let f = transition_operator(basis, mode, probe.character);
    let fg = f.apply(g)?;
    let norm = fg.norm();
    if norm * norm < 1e-300 {
        return Err(Error::StateUndefined { norm });
    }
    observable_expectation(&fg.normalized()?, basis, mode, probe.character)
}
