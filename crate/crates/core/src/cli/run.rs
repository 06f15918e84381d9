//! Batch driver: evaluate a run configuration into result rows.

use std::sync::Arc;

use rayon::prelude::*;

use crate::cli::config::{set_sweep_parameter, FlavorChoice, RunConfig};
use crate::cli::row::ResultRow;
use crate::cone::e1_closed_form;
use crate::error::{Error, Result};
use crate::fock::FockBasis;
use crate::models::BuiltModel;
use crate::probes::{
    filtered_correlator, mode_occupation_correlator, probe_level_correlator, AlphaResult,
    ProbeSpec,
};
use crate::solver::{full_spectrum, ground_state, SolverOptions, SpectrumResult};

/// Short status code for a failed evaluation.
pub fn status_code(error: &Error) -> &'static str {
    match error {
        Error::DegenerateGroundState { .. } => "degenerate_ground_state",
        Error::NoConvergence { .. } => "no_convergence",
        Error::VanishingProbeCurrent { .. } => "vanishing_mean",
        Error::AmbiguousModeSelection { .. } => "ambiguous_mode",
        Error::NoModeAtEnergy { .. } => "no_mode_at_energy",
        Error::InsufficientSpectrum { .. } => "insufficient_spectrum",
        Error::StateUndefined { .. } => "state_undefined",
        Error::DimensionOverflow { .. } => "dimension_overflow",
        Error::OperatorLeavesSector => "operator_leaves_sector",
        Error::EmptyMode { .. } => "empty_mode",
        Error::GridTooCoarse { .. } => "grid_too_coarse",
        _ => "error",
    }
}

/// Completed run: rows in sweep order.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub rows: Vec<ResultRow>,
    pub all_failed: bool,
}

fn row_skeleton(config: &RunConfig) -> ResultRow {
    ResultRow {
        model_id: config.model.model_id(),
        flavor: config.flavor.as_str().into(),
        eps0: config.probes[0].energy,
        eps1: config.probes[1].energy,
        gamma: config.probes[0].width,
        vprime: (config.flavor == FlavorChoice::ProbeLevel)
            .then_some(config.probes[0].coupling),
        alpha: None,
        mean0: None,
        mean1: None,
        covariance: None,
        e1: None,
        status: String::new(),
    }
}

/// Correlators this close to zero from below count as zero; genuinely
/// negative correlations keep the `negative_alpha` status.
const NEGATIVE_ALPHA_FLOOR: f64 = -1e-12;

fn fill_row(mut row: ResultRow, result: &AlphaResult) -> ResultRow {
    row.alpha = Some(result.alpha);
    row.mean0 = Some(result.mean0);
    row.mean1 = Some(result.mean1);
    row.covariance = Some(result.covariance);
    if result.alpha >= NEGATIVE_ALPHA_FLOOR {
        row.e1 = e1_closed_form(result.alpha.max(0.0)).ok();
        row.status = "ok".into();
    } else {
        row.e1 = None;
        row.status = "negative_alpha".into();
    }
    row
}

/// Precomputed model state shared across probe-only sweeps.
#[allow(clippy::large_enum_variant)]
enum Prepared {
    Mode {
        model: BuiltModel,
        ground: crate::solver::GroundState,
    },
    Filtered {
        spectrum: SpectrumResult,
    },
    PerPoint,
}

fn mode_basis_choice(config: &RunConfig, model: &BuiltModel) -> Result<Arc<FockBasis>> {
    let modes = model.mode_count();
    if model.operator.conserves_number() {
        let particles = config
            .solver
            .sector
            .unwrap_or(model.mode_basis.fermi_index() as u32);
        Ok(Arc::new(FockBasis::sector(modes, particles)?))
    } else {
        Ok(Arc::new(FockBasis::full(modes)?))
    }
}

fn select_tolerance(config: &RunConfig) -> f64 {
    config
        .tolerances
        .mode_select
        .unwrap_or_else(|| config.probes[0].width.min(config.probes[1].width))
}

fn prepare(config: &RunConfig, opts: &SolverOptions) -> Result<Prepared> {
    match config.flavor {
        FlavorChoice::Mode => {
            let model = config.model.build()?;
            let basis = mode_basis_choice(config, &model)?;
            let ground = ground_state(&model.operator, &basis, opts)?;
            Ok(Prepared::Mode { model, ground })
        }
        FlavorChoice::Filtered => {
            let model = config.model.build()?;
            let basis = Arc::new(FockBasis::full(model.mode_count())?);
            let spectrum = full_spectrum(&model.operator, &basis, opts)?;
            if spectrum.ground_degeneracy > 1 && !opts.allow_tie_break {
                return Err(Error::DegenerateGroundState {
                    count: spectrum.ground_degeneracy,
                    tol: opts.degeneracy_tol,
                });
            }
            Ok(Prepared::Filtered { spectrum })
        }
        FlavorChoice::ProbeLevel => Ok(Prepared::PerPoint),
    }
}

fn evaluate_with(
    config: &RunConfig,
    prepared: &Prepared,
    opts: &SolverOptions,
) -> Result<AlphaResult> {
    let tol = select_tolerance(config);
    let (probe0, probe1): (&ProbeSpec, &ProbeSpec) = (&config.probes[0], &config.probes[1]);
    match (config.flavor, prepared) {
        (FlavorChoice::Mode, Prepared::Mode { model, ground }) => {
            mode_occupation_correlator(&ground.vector, &model.mode_basis, probe0, probe1, tol)
        }
        (FlavorChoice::Filtered, Prepared::Filtered { spectrum }) => filtered_correlator(
            spectrum.ground_state(),
            spectrum.ground_energy(),
            spectrum,
            probe0,
            probe1,
        ),
        (FlavorChoice::ProbeLevel, Prepared::PerPoint) => {
            probe_level_correlator(&config.model, probe0, probe1, opts)
        }
        _ => unreachable!("prepared state always matches the flavor"),
    }
}

/// Evaluate one point, mapping numerical failures to status rows.
fn evaluate_point(config: &RunConfig, opts: &SolverOptions) -> ResultRow {
    let row = row_skeleton(config);
    let prepared = match prepare(config, opts) {
        Ok(p) => p,
        Err(e) => {
            let mut failed = row;
            failed.status = status_code(&e).into();
            return failed;
        }
    };
    match evaluate_with(config, &prepared, opts) {
        Ok(result) => fill_row(row, &result),
        Err(e) => {
            let mut failed = row;
            failed.status = status_code(&e).into();
            failed
        }
    }
}

/// Run the configuration: a single row, or one row per sweep point in
/// sweep order. Sweep points over probe parameters reuse the model
/// solution; sweeps over model parameters re-solve per point.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    config.validate()?;
    let opts = config.solver.to_options();

    let rows: Vec<ResultRow> = match &config.sweep {
        None => vec![evaluate_point(config, &opts)],
        Some(sweep) => {
            let model_sweep = sweep.parameter.starts_with("model.");
            if model_sweep {
                (0..sweep.steps)
                    .into_par_iter()
                    .map(|i| {
                        let mut point = config.clone();
                        point.sweep = None;
                        let value = RunConfig::sweep_value(sweep, i);
                        match set_sweep_parameter(&mut point, &sweep.parameter, value) {
                            Ok(()) => evaluate_point(&point, &opts),
                            Err(e) => {
                                let mut row = row_skeleton(&point);
                                row.status = status_code(&e).into();
                                row
                            }
                        }
                    })
                    .collect()
            } else {
                // Probe-parameter sweep: one model solve shared by all
                // points.
                let prepared = match prepare(config, &opts) {
                    Ok(p) => p,
                    Err(e) => {
                        let mut row = row_skeleton(config);
                        row.status = status_code(&e).into();
                        return Ok(RunOutcome {
                            all_failed: true,
                            rows: vec![row; sweep.steps],
                        });
                    }
                };
                (0..sweep.steps)
                    .into_par_iter()
                    .map(|i| {
                        let mut point = config.clone();
                        point.sweep = None;
                        let value = RunConfig::sweep_value(sweep, i);
                        if let Err(e) = set_sweep_parameter(&mut point, &sweep.parameter, value) {
                            let mut row = row_skeleton(&point);
                            row.status = status_code(&e).into();
                            return row;
                        }
                        let row = row_skeleton(&point);
                        match evaluate_with(&point, &prepared, &opts) {
                            Ok(result) => fill_row(row, &result),
                            Err(e) => {
                                let mut failed = row;
                                failed.status = status_code(&e).into();
                                failed
                            }
                        }
                    })
                    .collect()
            }
        }
    };

    let all_failed = rows
        .iter()
        .all(|r| r.status != "ok" && r.status != "negative_alpha");
    Ok(RunOutcome { rows, all_failed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairing_config(flavor: &str) -> String {
        format!(
            r#"
flavor = "{flavor}"

[model]
preset = "pairing_toy"
pairs = [{{ xi = 0.0, delta = 1.0 }}]

[[probes]]
energy = 0.0
character = "particle"
width = 1e-6
site = 0

[[probes]]
energy = 0.0
character = "particle"
width = 1e-6
site = 1
"#
        )
    }

    #[test]
    fn single_point_pairing_row() {
        let config = RunConfig::parse(&pairing_config("mode")).unwrap();
        let outcome = run(&config).unwrap();
        assert_eq!(outcome.rows.len(), 1);
        let row = &outcome.rows[0];
        assert_eq!(row.status, "ok");
        assert!((row.alpha.unwrap() - 1.0).abs() < 1e-12);
        assert!((row.e1.unwrap() - 2.0f64.ln()).abs() < 1e-12);
        assert!(!outcome.all_failed);
    }

    #[test]
    fn free_chain_sweep_is_all_zero() {
        // Particle probes on occupied modes of a free chain: means one,
        // covariance zero, entanglement zero, for every sweep point.
        let text = r#"
flavor = "mode"

[model]
preset = "free_chain"
sites = 6
hopping = 1.0

[[probes]]
energy = -1.8019377358048383
character = "particle"
width = 0.05
site = 0

[[probes]]
energy = -1.2469796037174672
character = "particle"
width = 0.05
site = 1

[sweep]
parameter = "probes.1.energy"
from = -1.2469796037174672
to = -1.2469796037174672
steps = 3
"#;
        let config = RunConfig::parse(text).unwrap();
        let outcome = run(&config).unwrap();
        assert_eq!(outcome.rows.len(), 3);
        for row in &outcome.rows {
            assert_eq!(row.status, "ok", "{row:?}");
            assert!(row.alpha.unwrap().abs() < 1e-12);
            assert_eq!(row.e1.unwrap(), 0.0);
        }
    }

    #[test]
    fn failed_points_become_status_rows() {
        // Probe energy far outside the spectrum: no mode within tolerance.
        let text = r#"
flavor = "mode"

[model]
preset = "free_chain"
sites = 4
hopping = 1.0

[[probes]]
energy = 50.0
character = "particle"
width = 0.05
site = 0

[[probes]]
energy = -1.6180339887498949
character = "particle"
width = 0.05
site = 1
"#;
        let config = RunConfig::parse(text).unwrap();
        let outcome = run(&config).unwrap();
        assert_eq!(outcome.rows[0].status, "no_mode_at_energy");
        assert!(outcome.all_failed);
    }

    #[test]
    fn sweep_rows_are_deterministic_and_ordered() {
        // Tilted pairing block with probes fixed on its modes; sweeping the
        // pairing amplitude moves the correlator monotonically.
        let text = r#"
flavor = "mode"

[model]
preset = "pairing_toy"
pairs = [{ xi = 0.4, delta = 0.5 }]

[[probes]]
energy = 0.4
character = "particle"
width = 1e-6
site = 0

[[probes]]
energy = 0.4
character = "particle"
width = 1e-6
site = 1

[sweep]
parameter = "model.pairs.0.delta"
from = 0.5
to = 1.5
steps = 5
"#;
        let config = RunConfig::parse(text).unwrap();
        let first = run(&config).unwrap();
        let second = run(&config).unwrap();
        assert_eq!(first.rows, second.rows);
        // Stronger pairing flattens u^2/v^2 toward one.
        let alphas: Vec<f64> = first.rows.iter().map(|r| r.alpha.unwrap()).collect();
        for pair in alphas.windows(2) {
            assert!(pair[1] < pair[0], "{alphas:?}");
        }
        assert!(*alphas.last().unwrap() > 1.0);
    }

    #[test]
    fn probe_level_rows_carry_coupling() {
        let text = r#"
flavor = "probe_level"

[model]
preset = "pairing_toy"
pairs = [{ xi = 0.0, delta = 1.0 }]

[[probes]]
energy = -1.0
character = "hole"
width = 0.05
site = 0
coupling = 0.02

[[probes]]
energy = 1.0
character = "particle"
width = 0.05
site = 1
coupling = 0.02
"#;
        let config = RunConfig::parse(text).unwrap();
        let outcome = run(&config).unwrap();
        let row = &outcome.rows[0];
        assert_eq!(row.vprime, Some(0.02));
        assert_eq!(row.status, "negative_alpha");
        assert!((row.alpha.unwrap() + 1.0).abs() < 1e-8);
        assert!(row.e1.is_none());
        assert!(!outcome.all_failed, "negative alpha is a valid result");
    }
}
